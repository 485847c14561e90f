//! Agents, atoms and the formula language.
//!
//! The seven primitive constructors are `Atom`, `Not`, `And`, `Knows`,
//! `Believes`, `After` and `AfterSafe`. Every other variant is sugar and is
//! removed by [`expand_derived`].

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::action::ActionLibrary;

/// Atom used by the expansion of `True`: `True := not (top and not top)`.
///
/// Any atom works since `p and not p` is false under every valuation; the
/// name is reserved so that expansions are recognisable when printed.
pub const TOP_ATOM: &str = "__top";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AgentId(String);

impl AgentId {
    pub fn new(name: impl Into<String>) -> Self {
        Self(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for AgentId {
    fn from(s: &str) -> Self {
        Self::new(s)
    }
}

impl From<String> for AgentId {
    fn from(s: String) -> Self {
        Self(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AtomId(String);

impl AtomId {
    pub fn new(name: impl Into<String>) -> Self {
        Self(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn top() -> Self {
        Self::new(TOP_ATOM)
    }
}

impl fmt::Display for AtomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for AtomId {
    fn from(s: &str) -> Self {
        Self::new(s)
    }
}

impl From<String> for AtomId {
    fn from(s: String) -> Self {
        Self(s)
    }
}

/// An agent executing a token of a named action structure: `(i, (A, α))`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ActionRef {
    pub agent: AgentId,
    pub structure: String,
    pub token: String,
}

impl ActionRef {
    pub fn new(
        agent: impl Into<AgentId>,
        structure: impl Into<String>,
        token: impl Into<String>,
    ) -> Self {
        Self {
            agent: agent.into(),
            structure: structure.into(),
            token: token.into(),
        }
    }
}

impl fmt::Display for ActionRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, {}.{}", self.agent, self.structure, self.token)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(AtomId),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Knows(AgentId, Box<Formula>),
    Believes(AgentId, Box<Formula>),
    /// `[i, (A, α)] φ`
    After(ActionRef, Box<Formula>),
    /// `[i, (A, α), S] φ`
    AfterSafe(ActionRef, Box<Formula>),

    True,
    False,
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    /// Dual of `Knows`.
    KnowsPossible(AgentId, Box<Formula>),
    /// Dual of `Believes`.
    BelievesPossible(AgentId, Box<Formula>),
    /// `<i, (A, α)> φ`
    CanAct(ActionRef, Box<Formula>),
    /// `<i, (A, α), S> φ`
    CanActSafely(ActionRef, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(AtomId::new(name))
    }

    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Formula) -> Self {
        Formula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn implies(self, rhs: Formula) -> Self {
        Formula::Implies(Box::new(self), Box::new(rhs))
    }

    pub fn knows(agent: impl Into<AgentId>, f: Formula) -> Self {
        Formula::Knows(agent.into(), Box::new(f))
    }

    pub fn believes(agent: impl Into<AgentId>, f: Formula) -> Self {
        Formula::Believes(agent.into(), Box::new(f))
    }

    pub fn knows_possible(agent: impl Into<AgentId>, f: Formula) -> Self {
        Formula::KnowsPossible(agent.into(), Box::new(f))
    }

    pub fn believes_possible(agent: impl Into<AgentId>, f: Formula) -> Self {
        Formula::BelievesPossible(agent.into(), Box::new(f))
    }

    pub fn after(act: ActionRef, f: Formula) -> Self {
        Formula::After(act, Box::new(f))
    }

    pub fn after_safe(act: ActionRef, f: Formula) -> Self {
        Formula::AfterSafe(act, Box::new(f))
    }

    pub fn can_act(act: ActionRef, f: Formula) -> Self {
        Formula::CanAct(act, Box::new(f))
    }

    pub fn can_act_safely(act: ActionRef, f: Formula) -> Self {
        Formula::CanActSafely(act, Box::new(f))
    }

    /// Conjunction of all formulas, right-nested. `True` when empty.
    pub fn conjunction(items: impl IntoIterator<Item = Formula>) -> Self {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Formula::True;
        };
        while let Some(f) = items.pop() {
            acc = f.and(acc);
        }
        acc
    }

    pub fn is_primitive_node(&self) -> bool {
        matches!(
            self,
            Formula::Atom(_)
                | Formula::Not(_)
                | Formula::And(..)
                | Formula::Knows(..)
                | Formula::Believes(..)
                | Formula::After(..)
                | Formula::AfterSafe(..)
        )
    }

    /// True when no sugar occurs anywhere in the tree.
    pub fn is_primitive(&self) -> bool {
        self.is_primitive_node() && self.children().iter().all(|c| c.is_primitive())
    }

    /// True when no dynamic modality (boxes or diamonds) occurs.
    pub fn is_static(&self) -> bool {
        match self {
            Formula::After(..)
            | Formula::AfterSafe(..)
            | Formula::CanAct(..)
            | Formula::CanActSafely(..) => false,
            _ => self.children().iter().all(|c| c.is_static()),
        }
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) | Formula::True | Formula::False => vec![],
            Formula::Not(f)
            | Formula::Knows(_, f)
            | Formula::Believes(_, f)
            | Formula::After(_, f)
            | Formula::AfterSafe(_, f)
            | Formula::KnowsPossible(_, f)
            | Formula::BelievesPossible(_, f)
            | Formula::CanAct(_, f)
            | Formula::CanActSafely(_, f) => vec![f],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => vec![a, b],
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Nesting depth of dynamic modalities.
    pub fn dynamic_depth(&self) -> usize {
        let inner = self
            .children()
            .iter()
            .map(|c| c.dynamic_depth())
            .max()
            .unwrap_or(0);
        match self {
            Formula::After(..)
            | Formula::AfterSafe(..)
            | Formula::CanAct(..)
            | Formula::CanActSafely(..) => inner + 1,
            _ => inner,
        }
    }

    /// Agents occurring in epistemic or doxastic operators.
    pub fn modal_agents(&self) -> BTreeSet<AgentId> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Knows(a, _)
            | Formula::Believes(a, _)
            | Formula::KnowsPossible(a, _)
            | Formula::BelievesPossible(a, _) => {
                out.insert(a.clone());
            }
            _ => {}
        });
        out
    }

    /// Agents occurring anywhere, including as the actor of an action reference.
    pub fn agents(&self) -> BTreeSet<AgentId> {
        let mut out = self.modal_agents();
        for act in self.action_refs() {
            out.insert(act.agent);
        }
        out
    }

    pub fn action_refs(&self) -> BTreeSet<ActionRef> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::After(a, _)
            | Formula::AfterSafe(a, _)
            | Formula::CanAct(a, _)
            | Formula::CanActSafely(a, _) => {
                out.insert(a.clone());
            }
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut dyn FnMut(&'a Formula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    /// Splits nested conjunctions into their conjuncts, left to right.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        match self {
            Formula::And(a, b) => {
                let mut out = a.conjuncts();
                out.extend(b.conjuncts());
                out
            }
            other => vec![other],
        }
    }
}

/// Rewrites every derived connective into the seven primitives.
///
/// `True` becomes `not (top and not top)`, `Implies(a, b)` becomes
/// `not (a and not b)`, `Or(a, b)` becomes `not (not a and not b)`, and each
/// diamond becomes `not box not`. Primitive nodes are copied as-is.
pub fn expand_derived(f: &Formula) -> Formula {
    use Formula::*;
    let bx = |g: &Formula| Box::new(expand_derived(g));
    match f {
        Atom(a) => Atom(a.clone()),
        Not(g) => Not(bx(g)),
        And(a, b) => And(bx(a), bx(b)),
        Knows(i, g) => Knows(i.clone(), bx(g)),
        Believes(i, g) => Believes(i.clone(), bx(g)),
        After(act, g) => After(act.clone(), bx(g)),
        AfterSafe(act, g) => AfterSafe(act.clone(), bx(g)),
        True => top(),
        False => top().not(),
        Or(a, b) => expand_derived(a).not().and(expand_derived(b).not()).not(),
        Implies(a, b) => imp(expand_derived(a), expand_derived(b)),
        KnowsPossible(i, g) => Knows(i.clone(), Box::new(expand_derived(g).not())).not(),
        BelievesPossible(i, g) => Believes(i.clone(), Box::new(expand_derived(g).not())).not(),
        CanAct(act, g) => After(act.clone(), Box::new(expand_derived(g).not())).not(),
        CanActSafely(act, g) => AfterSafe(act.clone(), Box::new(expand_derived(g).not())).not(),
    }
}

/// Inverse of [`expand_derived`] for display: folds the primitive shapes of
/// `True`, `False`, `->` and `<act>` back into sugar. Epistemic duals are
/// left alone since `not K i not` reads fine.
pub fn resugar(f: &Formula) -> Formula {
    use Formula::*;
    let bx = |g: &Formula| Box::new(resugar(g));
    if *f == top() {
        return True;
    }
    if let Not(g) = f {
        if **g == top() {
            return False;
        }
        match g.as_ref() {
            After(act, h) => {
                if let Not(body) = h.as_ref() {
                    return CanAct(act.clone(), bx(body));
                }
            }
            AfterSafe(act, h) => {
                if let Not(body) = h.as_ref() {
                    return CanActSafely(act.clone(), bx(body));
                }
            }
            _ => {}
        }
    }
    if let Some((a, b)) = as_implication(f) {
        return Implies(bx(a), bx(b));
    }
    match f {
        Not(g) => Not(bx(g)),
        And(a, b) => And(bx(a), bx(b)),
        Knows(i, g) => Knows(i.clone(), bx(g)),
        Believes(i, g) => Believes(i.clone(), bx(g)),
        After(act, g) => After(act.clone(), bx(g)),
        AfterSafe(act, g) => AfterSafe(act.clone(), bx(g)),
        _ => f.clone(),
    }
}

/// Primitive encoding of `True`.
pub fn top() -> Formula {
    let p = Formula::Atom(AtomId::top());
    p.clone().and(p.not()).not()
}

/// Primitive encoding of `a -> b`.
pub fn imp(a: Formula, b: Formula) -> Formula {
    a.and(b.not()).not()
}

/// Recognises the primitive implication shape `not (a and not b)`.
pub fn as_implication(f: &Formula) -> Option<(&Formula, &Formula)> {
    if let Formula::Not(inner) = f {
        if let Formula::And(a, nb) = inner.as_ref() {
            if let Formula::Not(b) = nb.as_ref() {
                return Some((a, b));
            }
        }
    }
    None
}

/// Atoms occurring in `f`. With a library, atoms in the `pre` and `pre_s`
/// of every referenced action token are included as well.
///
/// The sugar `True`/`False` contributes no atoms; its expansion contributes
/// [`TOP_ATOM`].
pub fn atoms_of(f: &Formula, actions: Option<&ActionLibrary>) -> BTreeSet<AtomId> {
    let mut out = BTreeSet::new();
    f.visit(&mut |g| {
        if let Formula::Atom(a) = g {
            out.insert(a.clone());
        }
    });
    if let Some(lib) = actions {
        for act in f.action_refs() {
            if let Some(tok) = lib.token(&act.structure, &act.token) {
                out.extend(atoms_of(&tok.pre, None));
                out.extend(atoms_of(&tok.pre_s, None));
            }
        }
    }
    out
}

fn write_unary(f: &mut fmt::Formatter<'_>, head: &str, g: &Formula) -> fmt::Result {
    write!(f, "{head} {g}")
}

/// Canonical text: `not f`, `(f and g)`, `K i f`, `[i, A.t] f`, `[i, A.t, S] f`.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Formula::*;
        match self {
            Atom(a) => write!(f, "atom {a}"),
            Not(g) => write_unary(f, "not", g),
            And(a, b) => write!(f, "({a} and {b})"),
            Knows(i, g) => write_unary(f, &format!("K {i}"), g),
            Believes(i, g) => write_unary(f, &format!("B {i}"), g),
            After(act, g) => write_unary(f, &format!("[{act}]"), g),
            AfterSafe(act, g) => write_unary(f, &format!("[{act}, S]"), g),
            True => f.write_str("true"),
            False => f.write_str("false"),
            Or(a, b) => write!(f, "({a} or {b})"),
            Implies(a, b) => write!(f, "({a} -> {b})"),
            KnowsPossible(i, g) => write_unary(f, &format!("Khat {i}"), g),
            BelievesPossible(i, g) => write_unary(f, &format!("Bhat {i}"), g),
            CanAct(act, g) => write_unary(f, &format!("<{act}>"), g),
            CanActSafely(act, g) => write_unary(f, &format!("<{act}, S>"), g),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }

    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn resugar_restores_readable_shapes() {
        let act = ActionRef::new("i", "A", "a");
        let f = Formula::can_act(act, Formula::True).implies(p().or(Formula::False));
        let back = resugar(&expand_derived(&f));
        assert_eq!(back.to_string(), "(<i, A.a> true -> (not atom p -> false))");
    }

    #[test]
    fn diamond_expands_to_negated_box() {
        let act = ActionRef::new("i", "A", "a");
        let f = Formula::can_act(act.clone(), p());
        assert_eq!(expand_derived(&f), Formula::after(act, p().not()).not());
    }

    #[test]
    fn true_expands_to_fixed_tautology() {
        let t = Formula::atom(TOP_ATOM);
        assert_eq!(expand_derived(&Formula::True), t.clone().and(t.not()).not());
    }

    #[test]
    fn implication_is_classical() {
        assert_eq!(
            expand_derived(&p().implies(q())),
            p().and(q().not()).not()
        );
        let e = expand_derived(&p().implies(q()));
        assert_eq!(as_implication(&e), Some((&p(), &q())));
    }

    #[test]
    fn primitives_copy_through() {
        let f = Formula::knows("i", p().not());
        assert_eq!(expand_derived(&f), f);
        assert!(!matches!(expand_derived(&p().not()), Formula::And(..)));
    }

    #[test]
    fn atoms_of_simple() {
        let f = p().and(q().not());
        let atoms: Vec<_> = atoms_of(&f, None).into_iter().collect();
        assert_eq!(atoms, vec![AtomId::from("p"), AtomId::from("q")]);
        let k = Formula::knows("i", p());
        assert_eq!(atoms_of(&k, None).len(), 1);
        assert!(atoms_of(&Formula::True, None).is_empty());
    }

    #[test]
    fn conjunction_nests_right() {
        let f = Formula::conjunction([p(), q(), Formula::atom("r")]);
        assert_eq!(f, p().and(q().and(Formula::atom("r"))));
        assert_eq!(f.conjuncts().len(), 3);
        assert_eq!(Formula::conjunction([]), Formula::True);
    }

    #[test]
    fn display_is_canonical() {
        let act = ActionRef::new("Pilot", "Input1", "HardNoseUp");
        let f = Formula::after_safe(act, Formula::knows("Pilot", p()).and(q().not()));
        assert_eq!(
            f.to_string(),
            "[Pilot, Input1.HardNoseUp, S] (K Pilot atom p and not atom q)"
        );
    }
}
