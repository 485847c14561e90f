//! A named model together with its actions, vocabulary and formulas.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::action::ActionLibrary;
use crate::formula::{ActionRef, AgentId, AtomId, Formula};
use crate::kripke::{check_frames, FrameCondition, KripkeModel, WorldId};

/// `atom := c1 and c2 and ...`, enforced on every world's valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Link {
    pub atom: AtomId,
    pub components: Vec<AtomId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub name: String,
    /// Skips the frame-condition invariant.
    pub raw: bool,
    pub agents: Vec<AgentId>,
    pub atoms: Vec<AtomId>,
    pub links: Vec<Link>,
    pub model: KripkeModel,
    pub actions: ActionLibrary,
    /// Named formulas, already expanded with earlier definitions.
    pub definitions: Vec<(String, Formula)>,
    pub queries: Vec<(String, Formula)>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScenarioError {
    #[error("undeclared agent `{0}`")]
    UnknownAgent(AgentId),
    #[error("undeclared atom `{0}`")]
    UnknownAtom(AtomId),
    #[error("action `{0}` does not resolve")]
    UnknownAction(ActionRef),
    #[error("link `{atom}` disagrees with its components at world {world}")]
    LinkViolated { atom: AtomId, world: WorldId },
    #[error("frame condition {condition} fails for agent `{agent}`")]
    FrameCondition {
        agent: AgentId,
        condition: FrameCondition,
    },
}

impl Scenario {
    pub fn definition(&self, name: &str) -> Option<&Formula> {
        self.definitions.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    pub fn query(&self, name: &str) -> Option<&Formula> {
        self.queries.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    /// The acting agent's reference to token `token` of structure `structure`.
    pub fn action_ref(&self, structure: &str, token: &str) -> Option<ActionRef> {
        let s = self.actions.get(structure)?;
        s.token(token)?;
        Some(ActionRef::new(s.actor().clone(), structure, token))
    }

    /// Reference to the actual token of `structure`.
    pub fn actual_action(&self, structure: &str) -> Option<ActionRef> {
        let s = self.actions.get(structure)?;
        Some(ActionRef::new(s.actor().clone(), structure, s.actual().name.clone()))
    }

    /// Checks that a formula only uses declared agents, atoms and actions.
    pub fn check_formula(&self, f: &Formula) -> Result<(), ScenarioError> {
        let atoms: BTreeSet<&AtomId> = self.atoms.iter().collect();
        let mut err = None;
        f.visit(&mut |g| {
            if err.is_some() {
                return;
            }
            err = match g {
                Formula::Atom(a) if !atoms.contains(a) && *a != AtomId::top() => {
                    Some(ScenarioError::UnknownAtom(a.clone()))
                }
                Formula::Knows(i, _)
                | Formula::Believes(i, _)
                | Formula::KnowsPossible(i, _)
                | Formula::BelievesPossible(i, _)
                    if !self.agents.contains(i) =>
                {
                    Some(ScenarioError::UnknownAgent(i.clone()))
                }
                Formula::After(act, _)
                | Formula::AfterSafe(act, _)
                | Formula::CanAct(act, _)
                | Formula::CanActSafely(act, _) => {
                    if !self.agents.contains(&act.agent) {
                        Some(ScenarioError::UnknownAgent(act.agent.clone()))
                    } else if self.actions.token(&act.structure, &act.token).is_none() {
                        Some(ScenarioError::UnknownAction(act.clone()))
                    } else {
                        None
                    }
                }
                _ => None,
            };
        });
        err.map_or(Ok(()), Err)
    }

    /// Full invariant check: vocabulary, links, and (unless `raw`) the
    /// frame conditions.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let atoms: BTreeSet<&AtomId> = self.atoms.iter().collect();
        for a in self.model.agents() {
            if !self.agents.contains(a) {
                return Err(ScenarioError::UnknownAgent(a.clone()));
            }
        }
        for a in self.model.atoms() {
            if !atoms.contains(&a) {
                return Err(ScenarioError::UnknownAtom(a));
            }
        }
        for s in self.actions.iter() {
            if !self.agents.contains(s.actor()) {
                return Err(ScenarioError::UnknownAgent(s.actor().clone()));
            }
            for a in s.agents() {
                if !self.agents.contains(a) {
                    return Err(ScenarioError::UnknownAgent(a.clone()));
                }
            }
            for a in s.atoms() {
                if !atoms.contains(&a) && a != AtomId::top() {
                    return Err(ScenarioError::UnknownAtom(a));
                }
            }
            for t in s.tokens() {
                self.check_formula(&t.pre)?;
                self.check_formula(&t.pre_s)?;
            }
        }
        for (_, f) in self.definitions.iter().chain(&self.queries) {
            self.check_formula(f)?;
        }
        for link in &self.links {
            for a in std::iter::once(&link.atom).chain(&link.components) {
                if !atoms.contains(a) {
                    return Err(ScenarioError::UnknownAtom(a.clone()));
                }
            }
            for w in 0..self.model.world_count() {
                let lhs = self.model.holds_atom(w, &link.atom);
                let rhs = link.components.iter().all(|c| self.model.holds_atom(w, c));
                if lhs != rhs {
                    return Err(ScenarioError::LinkViolated {
                        atom: link.atom.clone(),
                        world: self.model.world(w).clone(),
                    });
                }
            }
        }
        if !self.raw {
            let required = FrameCondition::all();
            if let Some((agent, condition)) = check_frames(&self.model)
                .failures()
                .into_iter()
                .find(|(_, c)| required.contains(c))
            {
                return Err(ScenarioError::FrameCondition { agent, condition });
            }
        }
        Ok(())
    }
}
