//! Derivations of the safety theorems, assembled as checked proof trees.

use serde::Serialize;

use super::{conclusion_unchecked, CheckedTheorem, Proof, ProofContext, ProofError, RuleTag};
use crate::action::ActionLibrary;
use crate::formula::{expand_derived, ActionRef, AgentId, Formula};

/// A proof paired with its (primitive) conclusion while building.
#[derive(Clone)]
struct Step {
    proof: Proof,
    concl: Formula,
}

impl Step {
    fn of(proof: Proof) -> Step {
        let concl = conclusion_unchecked(&proof);
        Step { proof, concl }
    }
}

/// From premises `⊢ p1 .. ⊢ pn`, derive `⊢ c` through the tautology
/// `p1 -> (p2 -> .. -> c)` and a chain of modus ponens.
fn by_taut(premises: &[&Step], conclusion: Formula) -> Step {
    let conclusion = expand_derived(&conclusion);
    let t = premises
        .iter()
        .rev()
        .fold(conclusion, |acc, s| s.concl.clone().implies(acc));
    let mut proof = Proof::Taut(t);
    for s in premises {
        proof = Proof::mp(proof, s.proof.clone());
    }
    Step::of(proof)
}

fn k(i: &AgentId, f: Formula) -> Formula {
    Formula::knows(i.clone(), f)
}

fn b(i: &AgentId, f: Formula) -> Formula {
    Formula::believes(i.clone(), f)
}

fn belief_possible_step(i: &AgentId, phi: &Formula) -> Step {
    let serial = Step::of(Proof::BSerial(i.clone(), phi.clone()));
    let kb = Step::of(Proof::KB(i.clone(), phi.clone().not()));
    by_taut(&[&serial, &kb], b(i, phi.clone()).implies(k(i, phi.clone().not()).not()))
}

/// `B_i φ -> not K_i not φ`: belief is consistent with knowledge.
pub fn derive_belief_implies_possible(i: &AgentId, phi: &Formula) -> Result<CheckedTheorem, ProofError> {
    CheckedTheorem::check(belief_possible_step(i, phi).proof, &ProofContext::empty(), "belief_implies_possible")
}

fn ud_sni_step(i: &AgentId, phi: &Formula) -> Step {
    let np = phi.clone().not();
    let nnp = np.clone().not();
    let kb = Step::of(Proof::KB(i.clone(), np.clone()));
    let kbi = Step::of(Proof::KBIntro(i.clone(), np.clone()));
    let l1 = belief_possible_step(i, &np);
    let kn = Step::of(Proof::KNec(i.clone(), Box::new(l1.proof.clone())));
    let kk1 = Step::of(Proof::KK(i.clone(), b(i, np.clone()), k(i, nnp.clone()).not()));

    // K φ -> K not not φ, then contrapose and lift under K
    let dn = Step::of(Proof::Taut(phi.clone().implies(nnp.clone())));
    let kn2 = Step::of(Proof::KNec(i.clone(), Box::new(dn.proof)));
    let kk2 = Step::of(Proof::KK(i.clone(), phi.clone(), nnp.clone()));
    let lift = by_taut(&[&kk2, &kn2], k(i, phi.clone()).implies(k(i, nnp.clone())));
    let contra = by_taut(&[&lift], k(i, nnp.clone()).not().implies(k(i, phi.clone()).not()));
    let kn3 = Step::of(Proof::KNec(i.clone(), Box::new(contra.proof)));
    let kk3 = Step::of(Proof::KK(i.clone(), k(i, nnp).not(), k(i, phi.clone()).not()));

    by_taut(
        &[&kb, &kbi, &kn, &kk1, &kn3, &kk3],
        k(i, np).implies(k(i, k(i, phi.clone()).not())),
    )
}

/// `K_i not φ -> K_i not K_i φ`: unknown-dangers imply strong negative
/// introspection. Uses EP1 and EP3.
pub fn derive_ud_implies_sni(i: &AgentId, phi: &Formula) -> Result<CheckedTheorem, ProofError> {
    CheckedTheorem::check(ud_sni_step(i, phi).proof, &ProofContext::empty(), "ud_implies_sni")
}

/// One numbered step of the negative-introspection derivation. `theorem`
/// proves `hypothesis -> statement`; `rules` are the characteristic rules
/// this step introduces.
#[derive(Clone, Debug, Serialize)]
pub struct DerivationStep {
    pub number: usize,
    #[serde(serialize_with = "display")]
    pub statement: Formula,
    pub rules: Vec<RuleTag>,
    #[serde(skip)]
    pub theorem: CheckedTheorem,
}

fn display<S: serde::Serializer>(f: &Formula, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(f)
}

#[derive(Clone, Debug)]
pub struct NegIntroDerivation {
    /// `<a> true -> not pre_s -> (not K pre_s and not K not K pre_s)`
    pub theorem: CheckedTheorem,
    /// Hypothesis shared by the steps: `<a> true and not pre_s`.
    pub hypothesis: Formula,
    pub steps: Vec<DerivationStep>,
}

impl NegIntroDerivation {
    /// Characteristic rules in step order.
    pub fn skeleton(&self) -> Vec<RuleTag> {
        self.steps.iter().flat_map(|s| s.rules.iter().copied()).collect()
    }
}

/// Executability of an action with a false safety precondition entails
/// failure of negative introspection about that precondition.
///
/// `pre_s` must be the safety precondition of `act` in `actions`; the
/// checker enforces this through the `Pre_S` axiom.
pub fn derive_neg_intro_failure(
    i: &AgentId,
    act: &ActionRef,
    pre_s: &Formula,
    actions: &ActionLibrary,
) -> Result<NegIntroDerivation, ProofError> {
    let act = ActionRef {
        agent: i.clone(),
        ..act.clone()
    };
    let ctx = ProofContext::new(actions);
    let p = pre_s.clone();
    let d = Formula::can_act(act.clone(), Formula::True);
    let safe = Formula::can_act_safely(act.clone(), Formula::True);
    let h = d.clone().and(p.clone().not());
    let kp = k(i, p.clone());
    let nknkp = k(i, kp.clone().not()).not();

    let s1 = by_taut(&[], h.clone().implies(p.clone().not()));
    let s2 = by_taut(&[], h.clone().implies(d.clone()));

    let pr = Step::of(Proof::PR(act.clone(), Formula::True));
    let pres = Step::of(Proof::PreS(act.clone(), p.clone()));
    let bnec = Step::of(Proof::BNec(i.clone(), Box::new(pres.proof.clone())));
    let bk = Step::of(Proof::BK(i.clone(), safe, p.clone()));
    let s3 = by_taut(&[&pr, &bnec, &bk], h.clone().implies(b(i, p.clone())));

    let kt = Step::of(Proof::KT(i.clone(), p.clone()));
    let s4 = by_taut(&[&kt], h.clone().implies(kp.clone().not()));

    let bbk = Step::of(Proof::BBK(i.clone(), p.clone()));
    let s5 = by_taut(&[&s3, &bbk], h.clone().implies(b(i, kp.clone())));

    let l1 = belief_possible_step(i, &kp);
    let s6 = by_taut(&[&s5, &l1], h.clone().implies(nknkp.clone()));

    let both = Step::of(Proof::AndIntro(Box::new(s4.proof.clone()), Box::new(s6.proof.clone())));
    let conj = kp.clone().not().and(nknkp.clone());
    let s7 = by_taut(&[&both], h.clone().implies(conj.clone()));

    let s8 = by_taut(
        &[&s7],
        h.clone().implies(kp.clone().not().implies(k(i, kp.clone().not())).not()),
    );

    let main = by_taut(&[&s7], d.clone().implies(p.clone().not().implies(conj.clone())));

    let statements = [
        p.clone().not(),
        d,
        b(i, p.clone()),
        kp.clone().not(),
        b(i, kp.clone()),
        nknkp,
        conj,
        kp.clone().not().implies(k(i, kp.not())).not(),
    ];
    let mut steps = Vec::new();
    let mut seen: Vec<RuleTag> = Vec::new();
    for (n, (step, statement)) in [s1, s2, s3, s4, s5, s6, s7, s8]
        .into_iter()
        .zip(statements)
        .enumerate()
    {
        let theorem = CheckedTheorem::check(step.proof, &ctx, format!("neg_intro_failure/{}", n + 1))?;
        let rules: Vec<RuleTag> = theorem
            .proof
            .cited_rules()
            .into_iter()
            .filter(|t| !seen.contains(t))
            .collect();
        seen.extend(&rules);
        steps.push(DerivationStep {
            number: n + 1,
            statement,
            rules,
            theorem,
        });
    }
    Ok(NegIntroDerivation {
        theorem: CheckedTheorem::check(main.proof, &ctx, "neg_intro_failure")?,
        hypothesis: h,
        steps,
    })
}

/// The four consequences of an executable action with a false safety
/// precondition, in order:
///
/// 1. `<a> true and not P -> not K not K P`
/// 2. `<a> true and not P -> not K not P`
/// 3. `K not P -> (not <a> true or P)`
/// 4. `K not P -> not <a> true`
pub fn derive_safety_consequences(
    i: &AgentId,
    act: &ActionRef,
    pre_s: &Formula,
    actions: &ActionLibrary,
) -> Result<Vec<CheckedTheorem>, ProofError> {
    let act = ActionRef {
        agent: i.clone(),
        ..act.clone()
    };
    let ctx = ProofContext::new(actions);
    let deriv = derive_neg_intro_failure(i, &act, pre_s, actions)?;
    let p = pre_s.clone();
    let d = Formula::can_act(act, Formula::True);
    let h = deriv.hypothesis.clone();
    let s6 = Step {
        proof: deriv.steps[5].theorem.proof.clone(),
        concl: deriv.steps[5].theorem.conclusion.clone(),
    };
    let ud = ud_sni_step(i, &p);
    let e3 = by_taut(&[&s6, &ud], h.implies(k(i, p.clone().not()).not()));
    let e4 = by_taut(&[&e3], k(i, p.clone().not()).implies(d.clone().not().or(p.clone())));
    let kt = Step::of(Proof::KT(i.clone(), p.clone().not()));
    let e5 = by_taut(&[&e4, &kt], k(i, p.not()).implies(d.not()));

    [(s6, "consequence/1"), (e3, "consequence/2"), (e4, "consequence/3"), (e5, "consequence/4")]
        .into_iter()
        .map(|(s, name)| CheckedTheorem::check(s.proof, &ctx, name))
        .collect()
}
