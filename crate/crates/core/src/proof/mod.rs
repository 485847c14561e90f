//! Hilbert-style proofs and their checker.
//!
//! A [`Proof`] is an explicit tree. Axiom nodes carry the formula parameters
//! of their schema; rule nodes carry their premises. [`check_proof`]
//! recomputes the conclusion bottom-up and rejects any node whose premises do
//! not fit its rule. All conclusions are primitive formulas (sugar in the
//! parameters is expanded first).

mod library;
mod taut;
mod text;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::action::ActionLibrary;
use crate::formula::{as_implication, expand_derived, imp, top, ActionRef, AgentId, Formula};

pub use library::{
    derive_belief_implies_possible, derive_neg_intro_failure, derive_safety_consequences, derive_ud_implies_sni,
    DerivationStep, NegIntroDerivation,
};
pub use taut::{is_tautology, MAX_TAUT_VARIABLES};
pub use text::{parse_proof, print_proof, ProofFile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleTag {
    HilbertK,
    HilbertS,
    ClassicNotNot,
    Taut,
    MP,
    KNec,
    KK,
    KT,
    BNec,
    BK,
    BSerial,
    B4,
    B5,
    /// EP1: `K φ -> B φ`.
    KB,
    /// EP2: `B φ -> B K φ`.
    BBK,
    /// EP3: `B φ -> K B φ`.
    KBIntro,
    SP,
    PR,
    /// `<i, (A, α), S> true -> pre_s(α)`.
    PreS,
    AndSimplL,
    AndSimplR,
    AndIntro,
}

impl RuleTag {
    pub const ALL: [RuleTag; 22] = [
        RuleTag::HilbertK,
        RuleTag::HilbertS,
        RuleTag::ClassicNotNot,
        RuleTag::Taut,
        RuleTag::MP,
        RuleTag::KNec,
        RuleTag::KK,
        RuleTag::KT,
        RuleTag::BNec,
        RuleTag::BK,
        RuleTag::BSerial,
        RuleTag::B4,
        RuleTag::B5,
        RuleTag::KB,
        RuleTag::BBK,
        RuleTag::KBIntro,
        RuleTag::SP,
        RuleTag::PR,
        RuleTag::PreS,
        RuleTag::AndSimplL,
        RuleTag::AndSimplR,
        RuleTag::AndIntro,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleTag::HilbertK => "Hilbert_K",
            RuleTag::HilbertS => "Hilbert_S",
            RuleTag::ClassicNotNot => "Classic_NOTNOT",
            RuleTag::Taut => "Taut",
            RuleTag::MP => "MP",
            RuleTag::KNec => "K_Nec",
            RuleTag::KK => "K_K",
            RuleTag::KT => "K_T",
            RuleTag::BNec => "B_Nec",
            RuleTag::BK => "B_K",
            RuleTag::BSerial => "B_Serial",
            RuleTag::B4 => "B_4",
            RuleTag::B5 => "B_5",
            RuleTag::KB => "K_B",
            RuleTag::BBK => "B_BK",
            RuleTag::KBIntro => "K_B_intro",
            RuleTag::SP => "SP",
            RuleTag::PR => "PR",
            RuleTag::PreS => "Pre_S",
            RuleTag::AndSimplL => "And_SimplL",
            RuleTag::AndSimplR => "And_SimplR",
            RuleTag::AndIntro => "And_Intro",
        }
    }

    pub fn from_name(s: &str) -> Option<RuleTag> {
        Self::ALL.into_iter().find(|t| t.name() == s)
    }

    /// Propositional glue, normality and necessitation are the "usual"
    /// machinery; everything else is an axiom a derivation cites by name.
    pub fn is_characteristic(self) -> bool {
        !matches!(
            self,
            RuleTag::HilbertK
                | RuleTag::HilbertS
                | RuleTag::ClassicNotNot
                | RuleTag::Taut
                | RuleTag::MP
                | RuleTag::KNec
                | RuleTag::BNec
                | RuleTag::KK
                | RuleTag::BK
                | RuleTag::AndSimplL
                | RuleTag::AndSimplR
        )
    }
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for RuleTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Proof {
    /// `p -> q -> p`
    HilbertK(Formula, Formula),
    /// `(p -> q -> r) -> (p -> q) -> p -> r`
    HilbertS(Formula, Formula, Formula),
    /// `not not p -> p`
    ClassicNotNot(Formula),
    /// Any propositional tautology, checked by truth table.
    Taut(Formula),
    /// Major premise `a -> b`, minor premise `a`.
    MP(Box<Proof>, Box<Proof>),
    KNec(AgentId, Box<Proof>),
    KK(AgentId, Formula, Formula),
    KT(AgentId, Formula),
    BNec(AgentId, Box<Proof>),
    BK(AgentId, Formula, Formula),
    BSerial(AgentId, Formula),
    B4(AgentId, Formula),
    B5(AgentId, Formula),
    KB(AgentId, Formula),
    BBK(AgentId, Formula),
    KBIntro(AgentId, Formula),
    SP(ActionRef, Formula),
    PR(ActionRef, Formula),
    PreS(ActionRef, Formula),
    AndSimplL(Box<Proof>),
    AndSimplR(Box<Proof>),
    AndIntro(Box<Proof>, Box<Proof>),
}

impl Proof {
    pub fn mp(major: Proof, minor: Proof) -> Proof {
        Proof::MP(Box::new(major), Box::new(minor))
    }

    pub fn tag(&self) -> RuleTag {
        match self {
            Proof::HilbertK(..) => RuleTag::HilbertK,
            Proof::HilbertS(..) => RuleTag::HilbertS,
            Proof::ClassicNotNot(..) => RuleTag::ClassicNotNot,
            Proof::Taut(..) => RuleTag::Taut,
            Proof::MP(..) => RuleTag::MP,
            Proof::KNec(..) => RuleTag::KNec,
            Proof::KK(..) => RuleTag::KK,
            Proof::KT(..) => RuleTag::KT,
            Proof::BNec(..) => RuleTag::BNec,
            Proof::BK(..) => RuleTag::BK,
            Proof::BSerial(..) => RuleTag::BSerial,
            Proof::B4(..) => RuleTag::B4,
            Proof::B5(..) => RuleTag::B5,
            Proof::KB(..) => RuleTag::KB,
            Proof::BBK(..) => RuleTag::BBK,
            Proof::KBIntro(..) => RuleTag::KBIntro,
            Proof::SP(..) => RuleTag::SP,
            Proof::PR(..) => RuleTag::PR,
            Proof::PreS(..) => RuleTag::PreS,
            Proof::AndSimplL(..) => RuleTag::AndSimplL,
            Proof::AndSimplR(..) => RuleTag::AndSimplR,
            Proof::AndIntro(..) => RuleTag::AndIntro,
        }
    }

    pub fn children(&self) -> Vec<&Proof> {
        match self {
            Proof::MP(a, b) | Proof::AndIntro(a, b) => vec![a, b],
            Proof::KNec(_, p) | Proof::BNec(_, p) | Proof::AndSimplL(p) | Proof::AndSimplR(p) => {
                vec![p]
            }
            _ => vec![],
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children().iter().map(|c| c.node_count()).sum::<usize>()
    }

    /// Rule tags in post-order (premises before the node using them).
    pub fn tags_postorder(&self) -> Vec<RuleTag> {
        let mut out = vec![];
        fn go(p: &Proof, out: &mut Vec<RuleTag>) {
            for c in p.children() {
                go(c, out);
            }
            out.push(p.tag());
        }
        go(self, &mut out);
        out
    }

    /// Distinct characteristic tags in order of first use.
    pub fn cited_rules(&self) -> Vec<RuleTag> {
        let mut seen = BTreeSet::new();
        self.tags_postorder()
            .into_iter()
            .filter(|t| t.is_characteristic() && seen.insert(*t))
            .collect()
    }
}

/// Resolves action references for `Pre_S` nodes and validates `SP`/`PR`
/// references. Without a library, `Pre_S` nodes cannot be checked.
#[derive(Clone, Copy, Debug, Default)]
pub struct ProofContext<'a> {
    pub actions: Option<&'a ActionLibrary>,
}

impl<'a> ProofContext<'a> {
    pub fn new(actions: &'a ActionLibrary) -> Self {
        Self {
            actions: Some(actions),
        }
    }

    pub fn empty() -> Self {
        Self { actions: None }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProofErrorKind {
    #[error("major premise is not an implication: {0}")]
    NotImplication(Formula),
    #[error("minor premise `{found}` does not match antecedent `{expected}`")]
    AntecedentMismatch { expected: Formula, found: Formula },
    #[error("premise is not a conjunction: {0}")]
    NotConjunction(Formula),
    #[error("not a propositional tautology: {0}")]
    NotTautology(Formula),
    #[error("tautology check over {0} propositional variables exceeds the limit")]
    TooManyVariables(usize),
    #[error("unknown action structure `{0}`")]
    UnknownStructure(String),
    #[error("unknown token `{token}` in `{structure}`")]
    UnknownToken { structure: String, token: String },
    #[error("`{found}` is not the safety precondition of the token (expected `{expected}`)")]
    PreSMismatch { expected: Formula, found: Formula },
    #[error("Pre_S needs an action library to resolve `{0}`")]
    MissingActionLibrary(ActionRef),
}

/// A failed node, located by child indices from the root.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("node {} ({rule}): {kind}", render_path(.path))]
pub struct ProofError {
    pub path: Vec<usize>,
    pub rule: RuleTag,
    pub kind: ProofErrorKind,
}

fn render_path(path: &[usize]) -> String {
    if path.is_empty() {
        return "/".to_string();
    }
    path.iter().map(|i| format!("/{i}")).collect()
}

/// Returns the conclusion of `p`, or the first failing node.
pub fn check_proof(p: &Proof, ctx: &ProofContext<'_>) -> Result<Formula, ProofError> {
    let mut path = vec![];
    check_at(p, ctx, &mut path, true)
}

/// Conclusion without validating action references. Used while assembling
/// library proofs, which are checked in full afterwards.
pub(crate) fn conclusion_unchecked(p: &Proof) -> Formula {
    check_at(p, &ProofContext::empty(), &mut vec![], false)
        .expect("library proofs are well-formed")
}

fn check_at(
    p: &Proof,
    ctx: &ProofContext<'_>,
    path: &mut Vec<usize>,
    validate_actions: bool,
) -> Result<Formula, ProofError> {
    let fail = |path: &Vec<usize>, kind| ProofError {
        path: path.clone(),
        rule: p.tag(),
        kind,
    };
    let x = expand_derived;
    let child = |i: usize, c: &Proof, path: &mut Vec<usize>| {
        path.push(i);
        let r = check_at(c, ctx, path, validate_actions);
        path.pop();
        r
    };
    let k = |a: &AgentId, f: Formula| Formula::knows(a.clone(), f);
    let b = |a: &AgentId, f: Formula| Formula::believes(a.clone(), f);

    if validate_actions {
        if let Proof::SP(act, _) | Proof::PR(act, _) | Proof::PreS(act, _) = p {
            match ctx.actions {
                Some(lib) => {
                    let s = lib
                        .get(&act.structure)
                        .ok_or_else(|| fail(path, ProofErrorKind::UnknownStructure(act.structure.clone())))?;
                    if s.token(&act.token).is_none() {
                        return Err(fail(
                            path,
                            ProofErrorKind::UnknownToken {
                                structure: act.structure.clone(),
                                token: act.token.clone(),
                            },
                        ));
                    }
                }
                None if matches!(p, Proof::PreS(..)) => {
                    return Err(fail(path, ProofErrorKind::MissingActionLibrary(act.clone())));
                }
                None => {}
            }
        }
    }

    Ok(match p {
        Proof::HilbertK(a, c) => imp(x(a), imp(x(c), x(a))),
        Proof::HilbertS(a, c, d) => {
            let (a, c, d) = (x(a), x(c), x(d));
            imp(
                imp(a.clone(), imp(c.clone(), d.clone())),
                imp(imp(a.clone(), c), imp(a, d)),
            )
        }
        Proof::ClassicNotNot(a) => imp(x(a).not().not(), x(a)),
        Proof::Taut(f) => {
            let f = x(f);
            match taut::is_tautology(&f) {
                Ok(true) => f,
                Ok(false) => return Err(fail(path, ProofErrorKind::NotTautology(f))),
                Err(n) => return Err(fail(path, ProofErrorKind::TooManyVariables(n))),
            }
        }
        Proof::MP(major, minor) => {
            let maj = child(0, major, path)?;
            let min = child(1, minor, path)?;
            let Some((ante, cons)) = as_implication(&maj) else {
                return Err(fail(path, ProofErrorKind::NotImplication(maj)));
            };
            if *ante != min {
                return Err(fail(
                    path,
                    ProofErrorKind::AntecedentMismatch {
                        expected: ante.clone(),
                        found: min,
                    },
                ));
            }
            cons.clone()
        }
        Proof::KNec(a, sub) => k(a, child(0, sub, path)?),
        Proof::BNec(a, sub) => b(a, child(0, sub, path)?),
        Proof::KK(a, f, g) => {
            let (f, g) = (x(f), x(g));
            imp(k(a, f.clone()), imp(k(a, imp(f, g.clone())), k(a, g)))
        }
        Proof::BK(a, f, g) => {
            let (f, g) = (x(f), x(g));
            imp(b(a, f.clone()), imp(b(a, imp(f, g.clone())), b(a, g)))
        }
        Proof::KT(a, f) => imp(k(a, x(f)), x(f)),
        Proof::BSerial(a, f) => imp(b(a, x(f)), b(a, x(f).not()).not()),
        Proof::B4(a, f) => imp(b(a, x(f)), b(a, b(a, x(f)))),
        Proof::B5(a, f) => imp(b(a, x(f)).not(), b(a, b(a, x(f)).not())),
        Proof::KB(a, f) => imp(k(a, x(f)), b(a, x(f))),
        Proof::BBK(a, f) => imp(b(a, x(f)), b(a, k(a, x(f)))),
        Proof::KBIntro(a, f) => imp(b(a, x(f)), k(a, b(a, x(f)))),
        Proof::SP(act, f) => imp(
            Formula::after(act.clone(), x(f)),
            Formula::after_safe(act.clone(), x(f)),
        ),
        Proof::PR(act, f) => imp(
            Formula::after(act.clone(), x(f).not()).not(),
            b(&act.agent, Formula::after_safe(act.clone(), x(f).not()).not()),
        ),
        Proof::PreS(act, f) => {
            let f = x(f);
            if validate_actions {
                if let Some(tok) = ctx.actions.and_then(|l| l.token(&act.structure, &act.token)) {
                    let expected = x(&tok.pre_s);
                    if expected != f {
                        return Err(fail(path, ProofErrorKind::PreSMismatch { expected, found: f }));
                    }
                }
            }
            imp(Formula::after_safe(act.clone(), top().not()).not(), f)
        }
        Proof::AndSimplL(sub) | Proof::AndSimplR(sub) => match child(0, sub, path)? {
            Formula::And(l, r) => {
                if matches!(p, Proof::AndSimplL(_)) {
                    *l
                } else {
                    *r
                }
            }
            other => return Err(fail(path, ProofErrorKind::NotConjunction(other))),
        },
        Proof::AndIntro(l, r) => {
            let l = child(0, l, path)?;
            let r = child(1, r, path)?;
            l.and(r)
        }
    })
}

/// A proof together with the conclusion the checker computed for it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckedTheorem {
    pub conclusion: Formula,
    pub proof: Proof,
    pub provenance: String,
}

impl CheckedTheorem {
    pub fn check(proof: Proof, ctx: &ProofContext<'_>, provenance: impl Into<String>) -> Result<Self, ProofError> {
        let conclusion = check_proof(&proof, ctx)?;
        Ok(Self {
            conclusion,
            proof,
            provenance: provenance.into(),
        })
    }
}
