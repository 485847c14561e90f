//! Product update and the satisfaction relation.
//!
//! Satisfaction is computed globally: [`extension`] returns the set of worlds
//! where a formula holds. The product `M × A` does not depend on the world
//! the action is executed from (only the new actual world does), so a dynamic
//! modality needs a single product per evaluation.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::action::{ActionLibrary, ActionStructure};
use crate::formula::{ActionRef, AgentId, Formula};
use crate::kripke::{AgentRelations, KripkeModel, WorldId};
use crate::relation::Relation;

pub type WorldSet = FixedBitSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("unknown agent `{0}`")]
    UnknownAgent(AgentId),
    #[error("unknown action structure `{0}`")]
    UnknownStructure(String),
    #[error("unknown token `{token}` in `{structure}`")]
    UnknownToken { structure: String, token: String },
    #[error("unknown world `{0}`")]
    UnknownWorld(WorldId),
    #[error("precondition of `{token}` does not hold at `{world}`")]
    PreconditionUnsatisfied { token: String, world: WorldId },
    #[error("action structure `{structure}` has no relations for agent `{agent}`")]
    MissingAgentRelations { structure: String, agent: AgentId },
}

/// A model together with the world of evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedModel {
    pub model: KripkeModel,
    pub world: usize,
}

impl PointedModel {
    pub fn new(model: KripkeModel, world: &WorldId) -> Result<Self, SemanticsError> {
        let world = model
            .world_index(world)
            .ok_or_else(|| SemanticsError::UnknownWorld(world.clone()))?;
        Ok(Self { model, world })
    }

    /// Pointed at the model's actual world.
    pub fn actual(model: KripkeModel) -> Self {
        let world = model.actual();
        Self { model, world }
    }

    pub fn world_id(&self) -> &WorldId {
        self.model.world(self.world)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UpdateOptions {
    /// Keep only the worlds reachable from the new actual world.
    pub collect_garbage: bool,
}

impl Default for UpdateOptions {
    fn default() -> Self {
        Self {
            collect_garbage: true,
        }
    }
}

/// `M × A` with every surviving `(v, β)` pair. `None` when no pair survives.
fn product(
    m: &KripkeModel,
    a: &ActionStructure,
    pre: &[WorldSet],
) -> Result<Option<KripkeModel>, SemanticsError> {
    let tokens = a.tokens();
    let mut index = vec![vec![None; tokens.len()]; m.world_count()];
    let mut worlds = vec![];
    let mut valuation = vec![];
    for v in 0..m.world_count() {
        for (t, tok) in tokens.iter().enumerate() {
            if !pre[t][v] {
                continue;
            }
            index[v][t] = Some(worlds.len());
            worlds.push(WorldId::pair(m.world(v).clone(), tok.name.clone()));
            let mut atoms = m.true_atoms(v).clone();
            for (atom, &value) in &tok.post {
                if value {
                    atoms.insert(atom.clone());
                } else {
                    atoms.remove(atom);
                }
            }
            valuation.push(atoms);
        }
    }
    if worlds.is_empty() {
        return Ok(None);
    }
    let n = worlds.len();
    let lift = |r: &Relation, x: &Relation| {
        let mut pairs = vec![];
        for (v, u) in r.pairs() {
            for (t, s) in x.pairs() {
                if let (Some(from), Some(to)) = (index[v][t], index[u][s]) {
                    pairs.push((from, to));
                }
            }
        }
        Relation::from_pairs(n, pairs)
    };
    let mut relations = BTreeMap::new();
    for (agent, r) in m.relations() {
        let x = a.relations().get(agent).ok_or_else(|| {
            SemanticsError::MissingAgentRelations {
                structure: a.name().to_string(),
                agent: agent.clone(),
            }
        })?;
        relations.insert(
            agent.clone(),
            AgentRelations {
                k: lift(&r.k, &x.k),
                b: lift(&r.b, &x.b),
            },
        );
    }
    Ok(Some(KripkeModel::from_parts(worlds, relations, 0, valuation)))
}

fn token_preconditions(m: &KripkeModel, a: &ActionStructure) -> Result<Vec<WorldSet>, SemanticsError> {
    a.tokens()
        .iter()
        .map(|t| static_extension(m, &t.pre))
        .collect()
}

/// `update(M, A, w, α, i)`: defined only when `pre(α)` holds at `w`.
pub fn update(
    m: &KripkeModel,
    a: &ActionStructure,
    w: &WorldId,
    alpha: &str,
    agent: &AgentId,
    opts: UpdateOptions,
) -> Result<PointedModel, SemanticsError> {
    if m.agent_relations(agent).is_none() {
        return Err(SemanticsError::UnknownAgent(agent.clone()));
    }
    let t = a
        .token_index(alpha)
        .ok_or_else(|| SemanticsError::UnknownToken {
            structure: a.name().to_string(),
            token: alpha.to_string(),
        })?;
    let wi = m
        .world_index(w)
        .ok_or_else(|| SemanticsError::UnknownWorld(w.clone()))?;
    let pre = token_preconditions(m, a)?;
    if !pre[t][wi] {
        return Err(SemanticsError::PreconditionUnsatisfied {
            token: alpha.to_string(),
            world: w.clone(),
        });
    }
    let model = product(m, a, &pre)?.expect("(w, alpha) survives");
    let target = WorldId::pair(w.clone(), alpha);
    let actual = model.world_index(&target).expect("(w, alpha) in product");
    let model = model.with_actual(actual);
    let model = if opts.collect_garbage {
        model.generated_submodel(actual)
    } else {
        model
    };
    Ok(PointedModel::actual(model))
}

pub(crate) fn static_extension(m: &KripkeModel, f: &Formula) -> Result<WorldSet, SemanticsError> {
    debug_assert!(f.is_static());
    extension(m, f, &ActionLibrary::new())
}

fn resolve<'a>(
    lib: &'a ActionLibrary,
    act: &ActionRef,
) -> Result<(&'a ActionStructure, usize), SemanticsError> {
    let s = lib
        .get(&act.structure)
        .ok_or_else(|| SemanticsError::UnknownStructure(act.structure.clone()))?;
    let t = s
        .token_index(&act.token)
        .ok_or_else(|| SemanticsError::UnknownToken {
            structure: act.structure.clone(),
            token: act.token.clone(),
        })?;
    Ok((s, t))
}

/// Worlds `w` for which the `(w, α)` successor exists and satisfies `body`,
/// restricted to the worlds in `gate`.
fn after_successors(
    m: &KripkeModel,
    lib: &ActionLibrary,
    act: &ActionRef,
    body: &Formula,
    safe: bool,
) -> Result<(WorldSet, WorldSet), SemanticsError> {
    if m.agent_relations(&act.agent).is_none() {
        return Err(SemanticsError::UnknownAgent(act.agent.clone()));
    }
    let (s, t) = resolve(lib, act)?;
    let pre = token_preconditions(m, s)?;
    let mut gate = pre[t].clone();
    if safe {
        gate.intersect_with(&static_extension(m, &s.tokens()[t].pre_s)?);
    }
    let n = m.world_count();
    let mut good = WorldSet::with_capacity(n);
    if let Some(prod) = product(m, s, &pre)? {
        let inner = extension(&prod, body, lib)?;
        for w in gate.ones() {
            let target = WorldId::pair(m.world(w).clone(), s.tokens()[t].name.clone());
            let idx = prod.world_index(&target).expect("gated world survives");
            if inner[idx] {
                good.insert(w);
            }
        }
    }
    Ok((gate, good))
}

fn boxed(m: &KripkeModel, rel: &Relation, inner: &WorldSet) -> WorldSet {
    let n = m.world_count();
    let mut out = WorldSet::with_capacity(n);
    for w in 0..n {
        if rel.successors(w).iter().all(|&v| inner[v]) {
            out.insert(w);
        }
    }
    out
}

fn diamond(m: &KripkeModel, rel: &Relation, inner: &WorldSet) -> WorldSet {
    let n = m.world_count();
    let mut out = WorldSet::with_capacity(n);
    for w in 0..n {
        if rel.successors(w).iter().any(|&v| inner[v]) {
            out.insert(w);
        }
    }
    out
}

fn complement(mut s: WorldSet) -> WorldSet {
    let n = s.len();
    s.toggle_range(..n);
    s
}

/// The set of worlds of `m` satisfying `f`. Sugar is evaluated directly,
/// not through its expansion.
pub fn extension(m: &KripkeModel, f: &Formula, lib: &ActionLibrary) -> Result<WorldSet, SemanticsError> {
    use Formula::*;
    let n = m.world_count();
    let rk = |i: &AgentId| m.rk(i).ok_or_else(|| SemanticsError::UnknownAgent(i.clone()));
    let rb = |i: &AgentId| m.rb(i).ok_or_else(|| SemanticsError::UnknownAgent(i.clone()));
    Ok(match f {
        Atom(a) => {
            let mut s = WorldSet::with_capacity(n);
            s.extend((0..n).filter(|&w| m.holds_atom(w, a)));
            s
        }
        Not(g) => complement(extension(m, g, lib)?),
        And(a, b) => {
            let mut s = extension(m, a, lib)?;
            s.intersect_with(&extension(m, b, lib)?);
            s
        }
        Knows(i, g) => boxed(m, rk(i)?, &extension(m, g, lib)?),
        Believes(i, g) => boxed(m, rb(i)?, &extension(m, g, lib)?),
        KnowsPossible(i, g) => diamond(m, rk(i)?, &extension(m, g, lib)?),
        BelievesPossible(i, g) => diamond(m, rb(i)?, &extension(m, g, lib)?),
        After(act, g) | AfterSafe(act, g) => {
            let (gate, good) = after_successors(m, lib, act, g, matches!(f, AfterSafe(..)))?;
            let mut s = complement(gate);
            s.union_with(&good);
            s
        }
        CanAct(act, g) | CanActSafely(act, g) => {
            after_successors(m, lib, act, g, matches!(f, CanActSafely(..)))?.1
        }
        True => {
            let mut s = WorldSet::with_capacity(n);
            s.insert_range(..);
            s
        }
        False => WorldSet::with_capacity(n),
        Or(a, b) => {
            let mut s = extension(m, a, lib)?;
            s.union_with(&extension(m, b, lib)?);
            s
        }
        Implies(a, b) => {
            let mut s = complement(extension(m, a, lib)?);
            s.union_with(&extension(m, b, lib)?);
            s
        }
    })
}

pub fn satisfies(pm: &PointedModel, f: &Formula, lib: &ActionLibrary) -> Result<bool, SemanticsError> {
    Ok(extension(&pm.model, f, lib)?[pm.world])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Validity {
    pub valid: bool,
    pub counter_worlds: Vec<WorldId>,
}

pub fn valid_on_model(m: &KripkeModel, f: &Formula, lib: &ActionLibrary) -> Result<Validity, SemanticsError> {
    let ext = extension(m, f, lib)?;
    let counter_worlds: Vec<WorldId> = (0..m.world_count())
        .filter(|&w| !ext[w])
        .map(|w| m.world(w).clone())
        .collect();
    Ok(Validity {
        valid: counter_worlds.is_empty(),
        counter_worlds,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrReport {
    pub pre_holds: bool,
    /// Every belief-accessible world satisfies `pre_s` (vacuous when `pre` fails).
    pub compliant: bool,
    pub violating_worlds: Vec<WorldId>,
    /// `<i, (A, α)> true -> B_i <i, (A, α), S> true` at the pointed world.
    pub schema_instance_holds: bool,
    pub agree: bool,
}

/// Checks the rationality contract at a pointed model: if the agent can
/// execute `alpha`, every world the agent considers doxastically possible
/// satisfies the token's safety precondition.
pub fn check_pr_compliance(
    pm: &PointedModel,
    a: &ActionStructure,
    alpha: &str,
    agent: &AgentId,
) -> Result<PrReport, SemanticsError> {
    let m = &pm.model;
    let t = a
        .token(alpha)
        .ok_or_else(|| SemanticsError::UnknownToken {
            structure: a.name().to_string(),
            token: alpha.to_string(),
        })?;
    let rb = m
        .rb(agent)
        .ok_or_else(|| SemanticsError::UnknownAgent(agent.clone()))?;
    let pre_holds = static_extension(m, &t.pre)?[pm.world];
    let pre_s = static_extension(m, &t.pre_s)?;
    let violating_worlds: Vec<WorldId> = if pre_holds {
        rb.successors(pm.world)
            .iter()
            .filter(|&&v| !pre_s[v])
            .map(|&v| m.world(v).clone())
            .collect()
    } else {
        vec![]
    };
    let compliant = violating_worlds.is_empty();
    let act = ActionRef::new(agent.clone(), a.name(), alpha);
    let schema = Formula::can_act(act.clone(), Formula::True)
        .implies(Formula::believes(agent.clone(), Formula::can_act_safely(act, Formula::True)));
    let lib = ActionLibrary::new().with(a.clone());
    let schema_instance_holds = satisfies(pm, &schema, &lib)?;
    Ok(PrReport {
        pre_holds,
        compliant,
        violating_worlds,
        schema_instance_holds,
        agree: compliant == schema_instance_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::ActionToken;
    use crate::formula::expand_derived;

    fn p() -> Formula {
        Formula::atom("p")
    }

    fn single(atoms: &[&str]) -> KripkeModel {
        KripkeModel::builder()
            .agent("i")
            .world("w", atoms.iter().copied())
            .k("i", "w", "w")
            .b("i", "w", "w")
            .actual("w")
            .build()
            .unwrap()
    }

    fn public(pre: Formula, pre_s: Formula) -> ActionStructure {
        ActionStructure::public("A", "i", [AgentId::from("i")], ActionToken::new("t", pre, pre_s)).unwrap()
    }

    #[test]
    fn atom_holds() {
        let pm = PointedModel::actual(single(&["p"]));
        assert!(satisfies(&pm, &p(), &ActionLibrary::new()).unwrap());
        assert!(!satisfies(&pm, &p().not(), &ActionLibrary::new()).unwrap());
    }

    #[test]
    fn trivial_public_update_is_identity_like() {
        let m = single(&["p"]);
        let a = public(Formula::True, Formula::True);
        let pm = update(&m, &a, &"w".into(), "t", &"i".into(), UpdateOptions::default()).unwrap();
        assert_eq!(pm.model.world_count(), 1);
        assert_eq!(pm.world_id(), &WorldId::pair("w".into(), "t"));
        assert!(pm.model.rk(&"i".into()).unwrap().contains(0, 0));
        assert!(pm.model.holds_atom(0, &"p".into()));
    }

    #[test]
    fn update_requires_precondition() {
        let m = single(&[]);
        let a = public(p(), p());
        let err = update(&m, &a, &"w".into(), "t", &"i".into(), UpdateOptions::default());
        assert!(matches!(err, Err(SemanticsError::PreconditionUnsatisfied { .. })));
    }

    #[test]
    fn boxes_are_vacuous_without_precondition() {
        let m = single(&[]);
        let lib = ActionLibrary::new().with(public(p(), p()));
        let act = ActionRef::new("i", "A", "t");
        let pm = PointedModel::actual(m);
        let falsum = Formula::False;
        assert!(satisfies(&pm, &Formula::after(act.clone(), falsum.clone()), &lib).unwrap());
        assert!(satisfies(&pm, &Formula::after_safe(act.clone(), falsum), &lib).unwrap());
        assert!(!satisfies(&pm, &Formula::can_act(act, Formula::True), &lib).unwrap());
    }

    #[test]
    fn post_assignments_change_facts() {
        let m = single(&["p"]);
        let a = ActionStructure::public(
            "A",
            "i",
            [AgentId::from("i")],
            ActionToken::new("t", Formula::True, Formula::True)
                .with_post("p", false)
                .with_post("q", true),
        )
        .unwrap();
        let lib = ActionLibrary::new().with(a);
        let act = ActionRef::new("i", "A", "t");
        let pm = PointedModel::actual(m);
        let f = Formula::after(act, p().not().and(Formula::atom("q")));
        assert!(satisfies(&pm, &f, &lib).unwrap());
    }

    #[test]
    fn unknown_names_are_errors() {
        let pm = PointedModel::actual(single(&[]));
        let lib = ActionLibrary::new();
        assert!(matches!(
            satisfies(&pm, &Formula::knows("j", p()), &lib),
            Err(SemanticsError::UnknownAgent(_))
        ));
        let act = ActionRef::new("i", "Nope", "t");
        assert!(matches!(
            satisfies(&pm, &Formula::after(act, p()), &lib),
            Err(SemanticsError::UnknownStructure(_))
        ));
    }

    #[test]
    fn sugar_agrees_with_expansion_on_fixture() {
        let m = KripkeModel::builder()
            .agent("i")
            .world("u", Vec::<&str>::new())
            .world("v", ["p"])
            .k_reflexive("i")
            .k("i", "u", "v")
            .b("i", "u", "v")
            .b("i", "v", "v")
            .actual("u")
            .build()
            .unwrap();
        let lib = ActionLibrary::new().with(public(p(), p()));
        let act = ActionRef::new("i", "A", "t");
        let corpus = [
            p().implies(Formula::knows("i", p())),
            Formula::knows_possible("i", p()).or(Formula::False),
            Formula::can_act(act.clone(), Formula::True),
            Formula::can_act_safely(act.clone(), p()),
            Formula::believes_possible("i", Formula::can_act(act, p())),
        ];
        for f in corpus {
            let a = extension(&m, &f, &lib).unwrap();
            let b = extension(&m, &expand_derived(&f), &lib).unwrap();
            assert_eq!(a, b, "{f}");
        }
    }

    #[test]
    fn pr_compliance_forced_and_violated() {
        // u: p, v: not p; pre = true, pre_s = p
        let m = KripkeModel::builder()
            .agent("i")
            .world("u", ["p"])
            .world("v", Vec::<&str>::new())
            .k_reflexive("i")
            .k("i", "u", "v")
            .b("i", "u", "u")
            .b("i", "v", "v")
            .actual("u")
            .build()
            .unwrap();
        let a = public(Formula::True, p());
        let ok = check_pr_compliance(&PointedModel::actual(m.clone()), &a, "t", &"i".into()).unwrap();
        assert!(ok.compliant && ok.schema_instance_holds && ok.agree);

        let bad_model = KripkeModel::builder()
            .agent("i")
            .world("u", ["p"])
            .world("v", Vec::<&str>::new())
            .k_reflexive("i")
            .k("i", "u", "v")
            .b("i", "u", "v")
            .b("i", "v", "v")
            .actual("u")
            .build()
            .unwrap();
        let bad = check_pr_compliance(&PointedModel::actual(bad_model), &a, "t", &"i".into()).unwrap();
        assert!(!bad.compliant);
        assert_eq!(bad.violating_worlds, vec![WorldId::from("v")]);
        assert!(!bad.schema_instance_holds);
        assert!(bad.agree);
    }

    #[test]
    fn valid_on_model_lists_counter_worlds() {
        let m = KripkeModel::builder()
            .agent("i")
            .world("u", Vec::<&str>::new())
            .world("v", ["p"])
            .k_reflexive("i")
            .actual("u")
            .build()
            .unwrap();
        let lib = ActionLibrary::new();
        assert!(valid_on_model(&m, &p().or(p().not()), &lib).unwrap().valid);
        let v = valid_on_model(&m, &p(), &lib).unwrap();
        assert_eq!(v.counter_worlds, vec![WorldId::from("u")]);
        assert!(valid_on_model(&m, &Formula::knows("i", p()).implies(p()), &lib).unwrap().valid);
    }
}
