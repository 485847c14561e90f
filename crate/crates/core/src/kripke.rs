//! Finite pointed Kripke models and frame-condition checks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use serde_json::{json, Value};
use thiserror::Error;

use crate::formula::{AgentId, AtomId};
use crate::relation::{compose, Relation};

/// A world: either a base name or a `(world, token)` pair built by update.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WorldId {
    Base(String),
    Pair(Box<WorldId>, String),
}

impl WorldId {
    pub fn base(name: impl Into<String>) -> Self {
        WorldId::Base(name.into())
    }

    pub fn pair(world: WorldId, token: impl Into<String>) -> Self {
        WorldId::Pair(Box::new(world), token.into())
    }
}

impl fmt::Display for WorldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WorldId::Base(s) => f.write_str(s),
            WorldId::Pair(w, t) => write!(f, "({w},{t})"),
        }
    }
}

impl Serialize for WorldId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl From<&str> for WorldId {
    fn from(s: &str) -> Self {
        WorldId::base(s)
    }
}

/// Epistemic (`k`) and doxastic (`b`) accessibility of one agent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AgentRelations {
    pub k: Relation,
    pub b: Relation,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("duplicate world `{0}`")]
    DuplicateWorld(WorldId),
    #[error("unknown world `{0}`")]
    UnknownWorld(WorldId),
    #[error("unknown agent `{0}`")]
    UnknownAgent(AgentId),
    #[error("model has no worlds")]
    NoWorlds,
    #[error("actual world not set")]
    NoActualWorld,
}

/// `⟨W, {R_k^i}, {R_b^i}, w, V⟩` with worlds kept in sorted order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    worlds: Vec<WorldId>,
    relations: BTreeMap<AgentId, AgentRelations>,
    actual: usize,
    valuation: Vec<BTreeSet<AtomId>>,
}

impl KripkeModel {
    pub fn builder() -> ModelBuilder {
        ModelBuilder::default()
    }

    /// Assembles a model from index-based parts, sorting worlds by id and
    /// renumbering relations to match.
    pub(crate) fn from_parts(
        worlds: Vec<WorldId>,
        relations: BTreeMap<AgentId, AgentRelations>,
        actual: usize,
        valuation: Vec<BTreeSet<AtomId>>,
    ) -> Self {
        let n = worlds.len();
        debug_assert_eq!(valuation.len(), n);
        debug_assert!(actual < n);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| worlds[a].cmp(&worlds[b]));
        if order.iter().enumerate().all(|(i, &o)| i == o) {
            return Self {
                worlds,
                relations,
                actual,
                valuation,
            };
        }
        let mut new_index = vec![None; n];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = Some(new);
        }
        let remap = |r: &Relation| r.restrict(&new_index, n);
        Self {
            worlds: order.iter().map(|&o| worlds[o].clone()).collect(),
            relations: relations
                .iter()
                .map(|(a, r)| {
                    (
                        a.clone(),
                        AgentRelations {
                            k: remap(&r.k),
                            b: remap(&r.b),
                        },
                    )
                })
                .collect(),
            actual: new_index[actual].expect("actual index in range"),
            valuation: order.iter().map(|&o| valuation[o].clone()).collect(),
        }
    }

    pub fn worlds(&self) -> &[WorldId] {
        &self.worlds
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn world_index(&self, w: &WorldId) -> Option<usize> {
        self.worlds.binary_search(w).ok()
    }

    pub fn world(&self, index: usize) -> &WorldId {
        &self.worlds[index]
    }

    pub fn actual(&self) -> usize {
        self.actual
    }

    pub fn actual_world(&self) -> &WorldId {
        &self.worlds[self.actual]
    }

    /// Same model pointed at another world.
    pub fn with_actual(&self, index: usize) -> Self {
        assert!(index < self.worlds.len());
        Self {
            actual: index,
            ..self.clone()
        }
    }

    pub fn agents(&self) -> impl Iterator<Item = &AgentId> {
        self.relations.keys()
    }

    pub fn relations(&self) -> &BTreeMap<AgentId, AgentRelations> {
        &self.relations
    }

    pub fn agent_relations(&self, agent: &AgentId) -> Option<&AgentRelations> {
        self.relations.get(agent)
    }

    pub fn rk(&self, agent: &AgentId) -> Option<&Relation> {
        self.relations.get(agent).map(|r| &r.k)
    }

    pub fn rb(&self, agent: &AgentId) -> Option<&Relation> {
        self.relations.get(agent).map(|r| &r.b)
    }

    pub fn true_atoms(&self, world: usize) -> &BTreeSet<AtomId> {
        &self.valuation[world]
    }

    pub fn holds_atom(&self, world: usize, atom: &AtomId) -> bool {
        self.valuation[world].contains(atom)
    }

    /// Atoms true somewhere in the model.
    pub fn atoms(&self) -> BTreeSet<AtomId> {
        self.valuation.iter().flatten().cloned().collect()
    }

    /// Restricts to the worlds reachable from `root` along any agent's
    /// epistemic or doxastic relation (the generated submodel).
    pub fn generated_submodel(&self, root: usize) -> Self {
        let n = self.worlds.len();
        let mut seen = vec![false; n];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(w) = stack.pop() {
            for r in self.relations.values() {
                for &v in r.k.successors(w).iter().chain(r.b.successors(w)) {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        let mut map = vec![None; n];
        let mut kept = 0;
        for (w, keep) in seen.iter().enumerate() {
            if *keep {
                map[w] = Some(kept);
                kept += 1;
            }
        }
        Self {
            worlds: (0..n).filter(|&w| seen[w]).map(|w| self.worlds[w].clone()).collect(),
            relations: self
                .relations
                .iter()
                .map(|(a, r)| {
                    (
                        a.clone(),
                        AgentRelations {
                            k: r.k.restrict(&map, kept),
                            b: r.b.restrict(&map, kept),
                        },
                    )
                })
                .collect(),
            actual: map[self.actual].expect("root is its own ancestor"),
            valuation: (0..n)
                .filter(|&w| seen[w])
                .map(|w| self.valuation[w].clone())
                .collect(),
        }
    }

    /// Report shape: `{worlds, relations: {agent: {k, b}}, actual, valuation}`.
    pub fn to_json(&self) -> Value {
        let name = |i: usize| self.worlds[i].to_string();
        let rel = |r: &Relation| -> Vec<[String; 2]> {
            r.pairs().map(|(a, b)| [name(a), name(b)]).collect()
        };
        let relations: serde_json::Map<String, Value> = self
            .relations
            .iter()
            .map(|(a, r)| (a.to_string(), json!({"k": rel(&r.k), "b": rel(&r.b)})))
            .collect();
        let valuation: serde_json::Map<String, Value> = (0..self.worlds.len())
            .map(|w| (name(w), json!(self.valuation[w])))
            .collect();
        json!({
            "worlds": (0..self.worlds.len()).map(name).collect::<Vec<_>>(),
            "relations": relations,
            "actual": name(self.actual),
            "valuation": valuation,
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct ModelBuilder {
    worlds: Vec<(WorldId, BTreeSet<AtomId>)>,
    agents: BTreeSet<AgentId>,
    k_pairs: Vec<(AgentId, WorldId, WorldId)>,
    b_pairs: Vec<(AgentId, WorldId, WorldId)>,
    actual: Option<WorldId>,
}

impl ModelBuilder {
    pub fn agent(mut self, agent: impl Into<AgentId>) -> Self {
        self.agents.insert(agent.into());
        self
    }

    pub fn world<I, A>(mut self, world: impl Into<WorldId>, atoms: I) -> Self
    where
        I: IntoIterator<Item = A>,
        A: Into<AtomId>,
    {
        self.worlds
            .push((world.into(), atoms.into_iter().map(Into::into).collect()));
        self
    }

    pub fn k(mut self, agent: impl Into<AgentId>, from: impl Into<WorldId>, to: impl Into<WorldId>) -> Self {
        self.k_pairs.push((agent.into(), from.into(), to.into()));
        self
    }

    pub fn b(mut self, agent: impl Into<AgentId>, from: impl Into<WorldId>, to: impl Into<WorldId>) -> Self {
        self.b_pairs.push((agent.into(), from.into(), to.into()));
        self
    }

    /// Adds `(w, w)` to the agent's epistemic relation for every world added so far.
    pub fn k_reflexive(mut self, agent: impl Into<AgentId>) -> Self {
        let agent = agent.into();
        for (w, _) in &self.worlds {
            self.k_pairs.push((agent.clone(), w.clone(), w.clone()));
        }
        self
    }

    pub fn actual(mut self, world: impl Into<WorldId>) -> Self {
        self.actual = Some(world.into());
        self
    }

    pub fn build(self) -> Result<KripkeModel, ModelError> {
        if self.worlds.is_empty() {
            return Err(ModelError::NoWorlds);
        }
        let mut entries = self.worlds;
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        for pair in entries.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(ModelError::DuplicateWorld(pair[0].0.clone()));
            }
        }
        let worlds: Vec<WorldId> = entries.iter().map(|(w, _)| w.clone()).collect();
        let valuation: Vec<BTreeSet<AtomId>> = entries.into_iter().map(|(_, v)| v).collect();
        let n = worlds.len();
        let index = |w: &WorldId| {
            worlds
                .binary_search(w)
                .map_err(|_| ModelError::UnknownWorld(w.clone()))
        };
        let mut k: BTreeMap<AgentId, Vec<(usize, usize)>> = BTreeMap::new();
        let mut b: BTreeMap<AgentId, Vec<(usize, usize)>> = BTreeMap::new();
        for a in &self.agents {
            k.insert(a.clone(), vec![]);
            b.insert(a.clone(), vec![]);
        }
        for (target, pairs) in [(&mut k, &self.k_pairs), (&mut b, &self.b_pairs)] {
            for (a, from, to) in pairs {
                let slot = target
                    .get_mut(a)
                    .ok_or_else(|| ModelError::UnknownAgent(a.clone()))?;
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
        let actual = index(self.actual.as_ref().ok_or(ModelError::NoActualWorld)?)?;
        Ok(KripkeModel {
            worlds,
            relations,
            actual,
            valuation,
        })
    }
}

/// The frame conditions under which the axiom system is sound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FrameCondition {
    RkReflexive,
    RbSerial,
    RbTransitive,
    RbEuclidean,
    RbSubsetRk,
    /// `(R_k ∘ R_b) ⊆ R_b`: `w R_b v ∧ v R_k u → w R_b u`.
    Ep2,
    /// `(R_b ∘ R_k) ⊆ R_b`: `w R_k v ∧ v R_b u → w R_b u`.
    Ep3,
}

impl FrameCondition {
    pub const ALL: [FrameCondition; 7] = [
        FrameCondition::RkReflexive,
        FrameCondition::RbSerial,
        FrameCondition::RbTransitive,
        FrameCondition::RbEuclidean,
        FrameCondition::RbSubsetRk,
        FrameCondition::Ep2,
        FrameCondition::Ep3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FrameCondition::RkReflexive => "rk_reflexive",
            FrameCondition::RbSerial => "rb_serial",
            FrameCondition::RbTransitive => "rb_transitive",
            FrameCondition::RbEuclidean => "rb_euclidean",
            FrameCondition::RbSubsetRk => "rb_subset_rk",
            FrameCondition::Ep2 => "ep2_condition",
            FrameCondition::Ep3 => "ep3_condition",
        }
    }

    pub fn all() -> BTreeSet<FrameCondition> {
        Self::ALL.into_iter().collect()
    }
}

impl fmt::Display for FrameCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for FrameCondition {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown frame condition `{0}`")]
pub struct UnknownCondition(pub String);

impl FromStr for FrameCondition {
    type Err = UnknownCondition;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let short = match s {
            "ep2" => Some(FrameCondition::Ep2),
            "ep3" => Some(FrameCondition::Ep3),
            _ => None,
        };
        short
            .or_else(|| Self::ALL.into_iter().find(|c| c.name() == s))
            .ok_or_else(|| UnknownCondition(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionResult {
    pub holds: bool,
    pub witnesses: Vec<Vec<WorldId>>,
}

impl ConditionResult {
    fn from_witnesses(witnesses: Vec<Vec<WorldId>>) -> Self {
        Self {
            holds: witnesses.is_empty(),
            witnesses,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AgentFrameReport {
    pub rk_reflexive: ConditionResult,
    pub rb_serial: ConditionResult,
    pub rb_transitive: ConditionResult,
    pub rb_euclidean: ConditionResult,
    pub rb_subset_rk: ConditionResult,
    pub ep2_condition: ConditionResult,
    pub ep3_condition: ConditionResult,
}

impl AgentFrameReport {
    pub fn get(&self, c: FrameCondition) -> &ConditionResult {
        match c {
            FrameCondition::RkReflexive => &self.rk_reflexive,
            FrameCondition::RbSerial => &self.rb_serial,
            FrameCondition::RbTransitive => &self.rb_transitive,
            FrameCondition::RbEuclidean => &self.rb_euclidean,
            FrameCondition::RbSubsetRk => &self.rb_subset_rk,
            FrameCondition::Ep2 => &self.ep2_condition,
            FrameCondition::Ep3 => &self.ep3_condition,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct FrameReport {
    pub agents: BTreeMap<AgentId, AgentFrameReport>,
}

impl FrameReport {
    pub fn all_hold(&self) -> bool {
        self.satisfies(&FrameCondition::all())
    }

    pub fn satisfies(&self, conditions: &BTreeSet<FrameCondition>) -> bool {
        self.agents
            .values()
            .all(|r| conditions.iter().all(|&c| r.get(c).holds))
    }

    /// Failed conditions as `(agent, condition)` pairs.
    pub fn failures(&self) -> Vec<(AgentId, FrameCondition)> {
        let mut out = vec![];
        for (a, r) in &self.agents {
            for c in FrameCondition::ALL {
                if !r.get(c).holds {
                    out.push((a.clone(), c));
                }
            }
        }
        out
    }
}

/// Checks every frame condition exhaustively. Witness tuples come out in
/// lexicographic world order because worlds are stored sorted.
pub fn check_frames(m: &KripkeModel) -> FrameReport {
    let agents = m
        .relations
        .iter()
        .map(|(a, r)| (a.clone(), check_agent(m, r)))
        .collect();
    FrameReport { agents }
}

fn check_agent(m: &KripkeModel, r: &AgentRelations) -> AgentFrameReport {
    let n = m.world_count();
    let names = |ix: &[usize]| ix.iter().map(|&i| m.worlds[i].clone()).collect::<Vec<_>>();
    let (k, b) = (&r.k, &r.b);

    let reflexive = (0..n).filter(|&w| !k.contains(w, w)).map(|w| names(&[w])).collect();
    let serial = (0..n)
        .filter(|&w| b.successors(w).is_empty())
        .map(|w| names(&[w]))
        .collect();

    let mut transitive = vec![];
    let mut euclidean = vec![];
    let mut ep2 = vec![];
    let mut ep3 = vec![];
    for w in 0..n {
        for v in 0..n {
            for u in 0..n {
                if b.contains(w, v) && b.contains(v, u) && !b.contains(w, u) {
                    transitive.push(names(&[w, v, u]));
                }
                if b.contains(w, v) && b.contains(w, u) && !b.contains(v, u) {
                    euclidean.push(names(&[w, v, u]));
                }
                if b.contains(w, v) && k.contains(v, u) && !b.contains(w, u) {
                    ep2.push(names(&[w, v, u]));
                }
                if k.contains(w, v) && b.contains(v, u) && !b.contains(w, u) {
                    ep3.push(names(&[w, v, u]));
                }
            }
        }
    }
    let subset = b
        .pairs()
        .filter(|&(w, v)| !k.contains(w, v))
        .map(|(w, v)| names(&[w, v]))
        .collect();

    debug_assert_eq!(ep2.is_empty(), compose(k, b).is_subset(b));
    debug_assert_eq!(ep3.is_empty(), compose(b, k).is_subset(b));

    AgentFrameReport {
        rk_reflexive: ConditionResult::from_witnesses(reflexive),
        rb_serial: ConditionResult::from_witnesses(serial),
        rb_transitive: ConditionResult::from_witnesses(transitive),
        rb_euclidean: ConditionResult::from_witnesses(euclidean),
        rb_subset_rk: ConditionResult::from_witnesses(subset),
        ep2_condition: ConditionResult::from_witnesses(ep2),
        ep3_condition: ConditionResult::from_witnesses(ep3),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_world_total() -> KripkeModel {
        let mut b = KripkeModel::builder()
            .agent("i")
            .world("u", Vec::<&str>::new())
            .world("v", ["p"])
            .actual("u");
        for x in ["u", "v"] {
            for y in ["u", "v"] {
                b = b.k("i", x, y).b("i", x, y);
            }
        }
        b.build().unwrap()
    }

    #[test]
    fn symmetric_two_world_model_passes_everything() {
        let r = check_frames(&two_world_total());
        assert!(r.all_hold());
        assert!(r.failures().is_empty());
    }

    #[test]
    fn reflexive_point_passes_everything() {
        let m = KripkeModel::builder()
            .agent("i")
            .world("w", ["p"])
            .k("i", "w", "w")
            .b("i", "w", "w")
            .actual("w")
            .build()
            .unwrap();
        assert!(check_frames(&m).all_hold());
    }

    #[test]
    fn empty_belief_is_not_serial() {
        let m = KripkeModel::builder()
            .agent("i")
            .world("w", Vec::<&str>::new())
            .k("i", "w", "w")
            .actual("w")
            .build()
            .unwrap();
        let r = check_frames(&m);
        let a = &r.agents[&AgentId::from("i")];
        assert!(!a.rb_serial.holds);
        assert_eq!(a.rb_serial.witnesses, vec![vec![WorldId::from("w")]]);
        assert!(a.rk_reflexive.holds);
    }

    #[test]
    fn witnesses_are_sorted() {
        let m = KripkeModel::builder()
            .agent("i")
            .world("c", Vec::<&str>::new())
            .world("a", Vec::<&str>::new())
            .world("b", Vec::<&str>::new())
            .actual("a")
            .build()
            .unwrap();
        let r = check_frames(&m);
        let w = &r.agents[&AgentId::from("i")].rk_reflexive.witnesses;
        let names: Vec<String> = w.iter().map(|t| t[0].to_string()).collect();
        assert_eq!(names, ["a", "b", "c"]);
    }

    #[test]
    fn builder_rejects_bad_input() {
        let dup = KripkeModel::builder()
            .world("w", Vec::<&str>::new())
            .world("w", Vec::<&str>::new())
            .actual("w")
            .build();
        assert!(matches!(dup, Err(ModelError::DuplicateWorld(_))));
        let unknown = KripkeModel::builder()
            .agent("i")
            .world("w", Vec::<&str>::new())
            .k("i", "w", "x")
            .actual("w")
            .build();
        assert!(matches!(unknown, Err(ModelError::UnknownWorld(_))));
        let agent = KripkeModel::builder()
            .world("w", Vec::<&str>::new())
            .k("j", "w", "w")
            .actual("w")
            .build();
        assert!(matches!(agent, Err(ModelError::UnknownAgent(_))));
    }

    #[test]
    fn pair_worlds_sort_after_their_base() {
        let a = WorldId::base("w");
        let p = WorldId::pair(a.clone(), "t");
        assert!(a < p);
        assert_eq!(p.to_string(), "(w,t)");
    }

    #[test]
    fn condition_names_round_trip() {
        for c in FrameCondition::ALL {
            assert_eq!(c.name().parse::<FrameCondition>().unwrap(), c);
        }
        assert!("reflexive".parse::<FrameCondition>().is_err());
    }

    #[test]
    fn json_shape() {
        let v = two_world_total().to_json();
        assert_eq!(v["actual"], "u");
        assert_eq!(v["worlds"], json!(["u", "v"]));
        assert_eq!(v["relations"]["i"]["k"].as_array().unwrap().len(), 4);
        assert_eq!(v["valuation"]["v"], json!(["p"]));
    }
}
