//! Action structures: tokens with `pre`, `pre_s` and `post`, plus per-agent
//! observability relations over tokens.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::formula::{AgentId, AtomId, Formula};
use crate::kripke::{AgentRelations, KripkeModel, WorldId};
use crate::relation::Relation;
use crate::semantics;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error("action structure `{0}` has no tokens")]
    NoTokens(String),
    #[error("duplicate token `{token}` in `{structure}`")]
    DuplicateToken { structure: String, token: String },
    #[error("unknown token `{token}` in `{structure}`")]
    UnknownToken { structure: String, token: String },
    #[error("unknown agent `{agent}` in `{structure}`")]
    UnknownAgent { structure: String, agent: AgentId },
    #[error("precondition of `{token}` in `{structure}` contains a dynamic modality")]
    DynamicPrecondition { structure: String, token: String },
    #[error("actual token of `{0}` not set")]
    NoActualToken(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionToken {
    pub name: String,
    pub pre: Formula,
    pub pre_s: Formula,
    /// Assignments applied by the token; atoms not listed keep their value.
    pub post: BTreeMap<AtomId, bool>,
}

impl ActionToken {
    pub fn new(name: impl Into<String>, pre: Formula, pre_s: Formula) -> Self {
        Self {
            name: name.into(),
            pre,
            pre_s,
            post: BTreeMap::new(),
        }
    }

    pub fn with_post(mut self, atom: impl Into<AtomId>, value: bool) -> Self {
        self.post.insert(atom.into(), value);
        self
    }
}

/// `⟨Actions, {χ_k^i}, {χ_b^i}, α⟩` with the acting agent recorded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionStructure {
    name: String,
    actor: AgentId,
    tokens: Vec<ActionToken>,
    relations: BTreeMap<AgentId, AgentRelations>,
    actual: usize,
}

impl ActionStructure {
    pub fn builder(name: impl Into<String>, actor: impl Into<AgentId>) -> ActionBuilder {
        ActionBuilder {
            name: name.into(),
            actor: actor.into(),
            tokens: vec![],
            agents: BTreeSet::new(),
            k_pairs: vec![],
            b_pairs: vec![],
            actual: None,
        }
    }

    /// One token, observed by everyone: identity relations for every agent.
    pub fn public(
        name: impl Into<String>,
        actor: impl Into<AgentId>,
        agents: impl IntoIterator<Item = AgentId>,
        token: ActionToken,
    ) -> Result<Self, ActionError> {
        let tname = token.name.clone();
        let mut b = Self::builder(name, actor).token(token).actual(tname.as_str());
        for a in agents {
            b = b
                .agent(a.clone())
                .k(a.clone(), tname.as_str(), tname.as_str())
                .b(a, tname.as_str(), tname.as_str());
        }
        b.build()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn actor(&self) -> &AgentId {
        &self.actor
    }

    pub fn tokens(&self) -> &[ActionToken] {
        &self.tokens
    }

    pub fn token_index(&self, name: &str) -> Option<usize> {
        self.tokens.iter().position(|t| t.name == name)
    }

    pub fn token(&self, name: &str) -> Option<&ActionToken> {
        self.tokens.iter().find(|t| t.name == name)
    }

    pub fn actual(&self) -> &ActionToken {
        &self.tokens[self.actual]
    }

    pub fn actual_index(&self) -> usize {
        self.actual
    }

    pub fn agents(&self) -> impl Iterator<Item = &AgentId> {
        self.relations.keys()
    }

    pub fn relations(&self) -> &BTreeMap<AgentId, AgentRelations> {
        &self.relations
    }

    pub fn xk(&self, agent: &AgentId) -> Option<&Relation> {
        self.relations.get(agent).map(|r| &r.k)
    }

    pub fn xb(&self, agent: &AgentId) -> Option<&Relation> {
        self.relations.get(agent).map(|r| &r.b)
    }

    /// Every atom mentioned by a token's `pre`, `pre_s` or `post`.
    pub fn atoms(&self) -> BTreeSet<AtomId> {
        let mut out = BTreeSet::new();
        for t in &self.tokens {
            out.extend(crate::formula::atoms_of(&t.pre, None));
            out.extend(crate::formula::atoms_of(&t.pre_s, None));
            out.extend(t.post.keys().cloned());
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct ActionBuilder {
    name: String,
    actor: AgentId,
    tokens: Vec<ActionToken>,
    agents: BTreeSet<AgentId>,
    k_pairs: Vec<(AgentId, String, String)>,
    b_pairs: Vec<(AgentId, String, String)>,
    actual: Option<String>,
}

impl ActionBuilder {
    pub fn token(mut self, token: ActionToken) -> Self {
        self.tokens.push(token);
        self
    }

    pub fn agent(mut self, agent: impl Into<AgentId>) -> Self {
        self.agents.insert(agent.into());
        self
    }

    pub fn k(mut self, agent: impl Into<AgentId>, from: &str, to: &str) -> Self {
        self.k_pairs.push((agent.into(), from.into(), to.into()));
        self
    }

    pub fn b(mut self, agent: impl Into<AgentId>, from: &str, to: &str) -> Self {
        self.b_pairs.push((agent.into(), from.into(), to.into()));
        self
    }

    pub fn actual(mut self, token: &str) -> Self {
        self.actual = Some(token.into());
        self
    }

    pub fn build(self) -> Result<ActionStructure, ActionError> {
        let structure = self.name.clone();
        if self.tokens.is_empty() {
            return Err(ActionError::NoTokens(structure));
        }
        let mut seen = BTreeSet::new();
        for t in &self.tokens {
            if !seen.insert(t.name.as_str()) {
                return Err(ActionError::DuplicateToken {
                    structure,
                    token: t.name.clone(),
                });
            }
            if !t.pre.is_static() || !t.pre_s.is_static() {
                return Err(ActionError::DynamicPrecondition {
                    structure,
                    token: t.name.clone(),
                });
            }
        }
        let n = self.tokens.len();
        let index = |name: &str| {
            self.tokens
                .iter()
                .position(|t| t.name == name)
                .ok_or_else(|| ActionError::UnknownToken {
                    structure: self.name.clone(),
                    token: name.to_string(),
                })
        };
        let mut k: BTreeMap<AgentId, Vec<(usize, usize)>> =
            self.agents.iter().map(|a| (a.clone(), vec![])).collect();
        let mut b = k.clone();
        for (target, pairs) in [(&mut k, &self.k_pairs), (&mut b, &self.b_pairs)] {
            for (a, from, to) in pairs {
                let slot = target.get_mut(a).ok_or_else(|| ActionError::UnknownAgent {
                    structure: self.name.clone(),
                    agent: a.clone(),
                })?;
                slot.push((index(from)?, index(to)?));
            }
        }
        let relations = self
            .agents
            .iter()
            .map(|a| {
                (
                    a.clone(),
                    AgentRelations {
                        k: Relation::from_pairs(n, k[a].iter().copied()),
                        b: Relation::from_pairs(n, b[a].iter().copied()),
                    },
                )
            })
            .collect();
        let actual = index(
            self.actual
                .as_deref()
                .ok_or_else(|| ActionError::NoActualToken(self.name.clone()))?,
        )?;
        Ok(ActionStructure {
            name: self.name,
            actor: self.actor,
            tokens: self.tokens,
            relations,
            actual,
        })
    }
}

/// Action structures by name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ActionLibrary {
    structures: BTreeMap<String, ActionStructure>,
}

impl ActionLibrary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Replaces any structure with the same name and returns the old one.
    pub fn insert(&mut self, s: ActionStructure) -> Option<ActionStructure> {
        self.structures.insert(s.name.clone(), s)
    }

    pub fn with(mut self, s: ActionStructure) -> Self {
        self.insert(s);
        self
    }

    pub fn get(&self, name: &str) -> Option<&ActionStructure> {
        self.structures.get(name)
    }

    pub fn token(&self, structure: &str, token: &str) -> Option<&ActionToken> {
        self.get(structure)?.token(token)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ActionStructure> {
        self.structures.values()
    }

    pub fn is_empty(&self) -> bool {
        self.structures.is_empty()
    }

    pub fn len(&self) -> usize {
        self.structures.len()
    }
}

/// Every `(token, world)` where `pre_s` holds but `pre` does not. An empty
/// result means the safe relation refines the plain one on `m`.
pub fn validate_safety_refinement(
    a: &ActionStructure,
    m: &KripkeModel,
) -> Result<Vec<(String, WorldId)>, semantics::SemanticsError> {
    let mut out = vec![];
    for t in &a.tokens {
        let pre = semantics::static_extension(m, &t.pre)?;
        let pre_s = semantics::static_extension(m, &t.pre_s)?;
        for w in 0..m.world_count() {
            if pre_s[w] && !pre[w] {
                out.push((t.name.clone(), m.world(w).clone()));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObservationReport {
    pub xk_reflexive: bool,
    pub xk_witnesses: Vec<String>,
    pub xb_serial: bool,
    pub xb_witnesses: Vec<String>,
}

/// Reflexivity of `χ_k` and seriality of `χ_b` for each agent.
pub fn observational_closure(a: &ActionStructure) -> BTreeMap<AgentId, ObservationReport> {
    let n = a.tokens.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a.tokens[x].name.cmp(&a.tokens[y].name));
    a.relations
        .iter()
        .map(|(agent, r)| {
            let xk_witnesses: Vec<String> = order
                .iter()
                .filter(|&&t| !r.k.contains(t, t))
                .map(|&t| a.tokens[t].name.clone())
                .collect();
            let xb_witnesses: Vec<String> = order
                .iter()
                .filter(|&&t| r.b.successors(t).is_empty())
                .map(|&t| a.tokens[t].name.clone())
                .collect();
            (
                agent.clone(),
                ObservationReport {
                    xk_reflexive: xk_witnesses.is_empty(),
                    xk_witnesses,
                    xb_serial: xb_witnesses.is_empty(),
                    xb_witnesses,
                },
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }

    #[test]
    fn public_action_is_reflexive_and_serial() {
        let a = ActionStructure::public(
            "A",
            "i",
            [AgentId::from("i"), AgentId::from("j")],
            ActionToken::new("t", Formula::True, Formula::True),
        )
        .unwrap();
        for r in observational_closure(&a).values() {
            assert!(r.xk_reflexive && r.xb_serial);
        }
    }

    #[test]
    fn oscar_reading_structure() {
        let mut b = ActionStructure::builder("read", "reader")
            .agent("reader")
            .agent("observer")
            .actual("n0");
        for n in 0..3 {
            let t = format!("n{n}");
            b = b.token(ActionToken::new(t.clone(), Formula::atom(format!("win{n}")), Formula::True));
            b = b.k("reader", &t, &t).b("reader", &t, &t);
            for m in 0..3 {
                let u = format!("n{m}");
                b = b.k("observer", &t, &u).b("observer", &t, &u);
            }
        }
        let a = b.build().unwrap();
        let r = observational_closure(&a);
        assert!(r[&AgentId::from("reader")].xk_reflexive);
        assert!(r[&AgentId::from("observer")].xk_reflexive);
    }

    #[test]
    fn empty_belief_relation_is_not_serial() {
        let a = ActionStructure::builder("A", "i")
            .agent("i")
            .token(ActionToken::new("t", Formula::True, Formula::True))
            .k("i", "t", "t")
            .actual("t")
            .build()
            .unwrap();
        let r = &observational_closure(&a)[&AgentId::from("i")];
        assert!(r.xk_reflexive);
        assert!(!r.xb_serial);
        assert_eq!(r.xb_witnesses, ["t"]);
    }

    #[test]
    fn refinement_violations() {
        let m = KripkeModel::builder()
            .agent("i")
            .world("w", Vec::<&str>::new())
            .world("v", ["p"])
            .actual("v")
            .build()
            .unwrap();
        let same = ActionStructure::public("A", "i", [AgentId::from("i")], ActionToken::new("t", p(), p())).unwrap();
        assert!(validate_safety_refinement(&same, &m).unwrap().is_empty());
        let loose = ActionStructure::public("A", "i", [AgentId::from("i")], ActionToken::new("t", p(), Formula::True)).unwrap();
        assert_eq!(
            validate_safety_refinement(&loose, &m).unwrap(),
            vec![("t".to_string(), WorldId::from("w"))]
        );
    }

    #[test]
    fn builder_rejects_dynamic_preconditions() {
        let act = crate::formula::ActionRef::new("i", "A", "t");
        let err = ActionStructure::builder("A", "i")
            .token(ActionToken::new("t", Formula::after(act, p()), Formula::True))
            .actual("t")
            .build();
        assert!(matches!(err, Err(ActionError::DynamicPrecondition { .. })));
    }

    #[test]
    fn builder_rejects_unknown_tokens() {
        let err = ActionStructure::builder("A", "i")
            .agent("i")
            .token(ActionToken::new("t", Formula::True, Formula::True))
            .k("i", "t", "u")
            .actual("t")
            .build();
        assert!(matches!(err, Err(ActionError::UnknownToken { .. })));
    }
}
