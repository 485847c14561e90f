//! Aviation vocabulary, three incident scenarios, and the missing-safety-
//! information diagnosis.

mod discretize;
mod vocab;

use serde::Serialize;
use thiserror::Error;

pub use discretize::{
    discretize_reading, Axis, BucketTable, DiscretizeError, AIRSPEED, ALTITUDE, HORIZONTAL_LEFT,
    HORIZONTAL_RIGHT, VERTICAL_DOWN, VERTICAL_UP,
};
pub use vocab::{cardinalities, AviationAtom, Crew, GlobalReading, Input, Mode, Reading, Side};

use crate::action::{ActionLibrary, ActionStructure, ActionToken};
use crate::formula::{ActionRef, AgentId, AtomId, Formula};
use crate::kripke::{KripkeModel, WorldId};
use crate::proof::{
    derive_belief_implies_possible, derive_neg_intro_failure, derive_safety_consequences, derive_ud_implies_sni,
    print_proof, CheckedTheorem, DerivationStep, ProofError, RuleTag,
};
use crate::scenario::{Link, Scenario};
use crate::semantics::{check_pr_compliance, extension, satisfies, PointedModel, SemanticsError};

use Reading::*;

pub const ACTUAL: &str = "actual";
pub const BELIEVED: &str = "believed";

/// Autothrottle engaged. Scenario-local: not part of the cockpit vocabulary.
pub const AT_ON: &str = "AT_On";

struct Plan {
    name: &'static str,
    structure: &'static str,
    input: Input,
    pre: Formula,
    pre_s: Formula,
    actual: Vec<AtomId>,
    believed: Vec<AtomId>,
    extra_atoms: Vec<AtomId>,
    links: Vec<GlobalReading>,
    config: Formula,
}

fn r(a: AviationAtom) -> AtomId {
    a.render()
}

fn at(s: Side, x: Reading) -> AviationAtom {
    AviationAtom::InstrumentAt(s, x)
}

/// Two worlds: the actual configuration and the one the pilot believes in.
/// The pilot cannot rule out either from the actual world but believes
/// only the second; the other crew members are uninformed.
fn build(plan: Plan) -> Scenario {
    let crew: Vec<AgentId> = Crew::ALL.iter().map(|c| c.agent()).collect();
    let input_atom = r(AviationAtom::InputIs(plan.input));

    let mut atoms: Vec<AtomId> = plan
        .actual
        .iter()
        .chain(&plan.believed)
        .chain(&plan.extra_atoms)
        .cloned()
        .collect();
    atoms.push(input_atom.clone());
    let mut links = vec![];
    for g in &plan.links {
        let comps: Vec<AtomId> = g.components().iter().map(|c| c.render()).collect();
        atoms.extend(comps.iter().cloned());
        atoms.push(r(AviationAtom::GlobalIs(*g)));
        links.push(Link {
            atom: r(AviationAtom::GlobalIs(*g)),
            components: comps,
        });
    }
    atoms.sort();
    atoms.dedup();

    // close each valuation under the links
    let close = |mut v: Vec<AtomId>| {
        for l in &links {
            if l.components.iter().all(|c| v.contains(c)) && !v.contains(&l.atom) {
                v.push(l.atom.clone());
            }
        }
        v
    };
    let pilot = Crew::Pilot.agent();
    let mut mb = KripkeModel::builder()
        .world(ACTUAL, close(plan.actual))
        .world(BELIEVED, close(plan.believed))
        .actual(ACTUAL);
    for a in &crew {
        mb = mb.agent(a.clone());
        if *a == pilot {
            mb = mb
                .k(a.clone(), ACTUAL, ACTUAL)
                .k(a.clone(), ACTUAL, BELIEVED)
                .k(a.clone(), BELIEVED, BELIEVED)
                .b(a.clone(), ACTUAL, BELIEVED)
                .b(a.clone(), BELIEVED, BELIEVED);
        } else {
            for x in [ACTUAL, BELIEVED] {
                for y in [ACTUAL, BELIEVED] {
                    mb = mb.k(a.clone(), x, y).b(a.clone(), x, y);
                }
            }
        }
    }
    let model = mb.build().expect("scenario model is well-formed");

    let token = ActionToken::new(plan.input.name(), plan.pre.clone(), plan.pre_s.clone())
        .with_post(input_atom, true);
    let structure = ActionStructure::public(plan.structure, pilot.clone(), crew.clone(), token)
        .expect("public action is well-formed");
    let act = ActionRef::new(pilot.clone(), plan.structure, plan.input.name());
    let act_def = Formula::can_act(act, Formula::True);
    let conclusion = Formula::knows(pilot.clone(), plan.pre_s.clone())
        .not()
        .and(Formula::knows(pilot.clone(), Formula::knows(pilot, plan.pre_s.clone()).not()).not());

    let s = Scenario {
        name: plan.name.to_string(),
        raw: false,
        agents: crew,
        atoms,
        links,
        model,
        actions: ActionLibrary::new().with(structure),
        definitions: vec![
            ("Config".to_string(), plan.config.clone()),
            ("Act".to_string(), act_def.clone()),
        ],
        queries: vec![
            ("executed".to_string(), act_def.clone()),
            ("unsafe".to_string(), plan.pre_s.not()),
            ("neg_intro_failure".to_string(), plan.config.implies(act_def.implies(conclusion))),
        ],
    };
    debug_assert_eq!(s.validate(), Ok(()));
    s
}

/// Air France 447: a hard nose-up input under alternate law with
/// disagreeing airspeed indications, while the pilot believes the aircraft
/// is in normal law at cruise speed.
pub fn build_af447() -> Scenario {
    let pre = GlobalReading::new(Mode::Alternate2, AirspeedSlow3, AirspeedSlow3, AirspeedCruise);
    let pre_s = GlobalReading::new(Mode::Normal, AirspeedCruise, AirspeedCruise, AirspeedCruise);
    let config = Formula::conjunction(pre.components().iter().map(|a| a.formula()));
    build(Plan {
        name: "af447",
        structure: "Input1",
        input: Input::HardNoseUp,
        pre: AviationAtom::GlobalIs(pre).formula(),
        pre_s: AviationAtom::GlobalIs(pre_s).formula(),
        actual: pre.components().iter().map(|a| a.render()).collect(),
        believed: pre_s.components().iter().map(|a| a.render()).collect(),
        extra_atoms: vec![],
        links: vec![pre, pre_s],
        config,
    })
}

/// Copa 201: a hard right-roll input on a faulty left attitude indicator
/// while the backup shows wings level.
pub fn build_copa201() -> Scenario {
    let left = at(Side::Left, HorLeft2);
    let mid = at(Side::Middle, HorLeft2);
    build(Plan {
        name: "copa201",
        structure: "RollInput",
        input: Input::HardWingRight,
        pre: left.formula(),
        pre_s: mid.formula(),
        actual: vec![r(left), r(at(Side::Middle, HorLevel)), r(at(Side::Right, HorLeft2))],
        believed: vec![r(left), r(mid), r(at(Side::Right, HorLeft2))],
        extra_atoms: vec![],
        links: vec![],
        config: left.formula().and(mid.formula().not()),
    })
}

/// Asiana 214: thrust pulled back at low airspeed with the autothrottle
/// protection off, while the pilot believes it is on.
pub fn build_asiana214() -> Scenario {
    let slow = at(Side::Left, AirspeedSlow3);
    let at_on = Formula::atom(AT_ON);
    build(Plan {
        name: "asiana214",
        structure: "ThrustInput",
        input: Input::HardThrustMinus,
        pre: slow.formula(),
        pre_s: at_on.clone(),
        actual: vec![r(slow)],
        believed: vec![r(slow), AtomId::new(AT_ON)],
        extra_atoms: vec![AtomId::new(AT_ON)],
        links: vec![],
        config: at_on.not().and(slow.formula()),
    })
}

/// Built-in scenario by name.
pub fn builtin(name: &str) -> Option<Scenario> {
    match name {
        "af447" => Some(build_af447()),
        "copa201" => Some(build_copa201()),
        "asiana214" => Some(build_asiana214()),
        _ => None,
    }
}

pub const BUILTIN_NAMES: [&str; 3] = ["af447", "copa201", "asiana214"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("action `{0}` was not executed: its precondition fails at the actual world")]
    NotExecuted(ActionRef),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Proof(#[from] ProofError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SafetyProperty {
    /// Strong negative introspection: `not φ -> K not K φ`.
    Sni,
    /// Unsafety delivery: `not φ -> K not φ`.
    Ud,
}

/// The property instance for agent `i` and safety condition `phi`.
pub fn property_formula(p: SafetyProperty, i: &AgentId, phi: &Formula) -> Formula {
    let consequent = match p {
        SafetyProperty::Sni => Formula::knows(i.clone(), Formula::knows(i.clone(), phi.clone()).not()),
        SafetyProperty::Ud => Formula::knows(i.clone(), phi.clone().not()),
    };
    phi.clone().not().implies(consequent)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub property: SafetyProperty,
    #[serde(serialize_with = "as_text")]
    pub formula: Formula,
    pub per_world: Vec<(WorldId, bool)>,
    pub valid: bool,
}

fn as_text<S: serde::Serializer, T: std::fmt::Display>(f: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(f)
}

/// Evaluates SNI or UD for `pre_s` of `act` at every world of a model.
pub fn evaluate_property_on(
    m: &KripkeModel,
    p: SafetyProperty,
    i: &AgentId,
    phi: &Formula,
) -> Result<PropertyReport, SemanticsError> {
    let f = property_formula(p, i, phi);
    let ext = extension(m, &f, &ActionLibrary::new())?;
    let per_world: Vec<(WorldId, bool)> = (0..m.world_count()).map(|w| (m.world(w).clone(), ext[w])).collect();
    Ok(PropertyReport {
        property: p,
        valid: per_world.iter().all(|(_, v)| *v),
        formula: f,
        per_world,
    })
}

pub fn evaluate_safety_property(
    s: &Scenario,
    p: SafetyProperty,
    act: &ActionRef,
) -> Result<PropertyReport, AnalysisError> {
    let tok = s
        .actions
        .token(&act.structure, &act.token)
        .ok_or_else(|| AnalysisError::UnknownAction(format!("{}.{}", act.structure, act.token)))?;
    Ok(evaluate_property_on(&s.model, p, &act.agent, &tok.pre_s)?)
}

/// Verdicts for one false safety-critical fact at the actual world.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactVerdict {
    pub fact: AtomId,
    /// `true` when the property holds at the actual world.
    pub sni: bool,
    pub ud: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Diagnosis {
    pub scenario: String,
    pub action: String,
    pub pre_holds: bool,
    pub pre_s_holds: bool,
    /// Safety-critical facts false at the actual world.
    pub missing_facts: Vec<AtomId>,
    /// `not K pre_s` at the actual world.
    pub not_knows_pre_s: bool,
    /// `not K not K pre_s` at the actual world.
    pub not_knows_not_knows_pre_s: bool,
    pub sni: bool,
    pub ud: bool,
    pub per_fact: Vec<FactVerdict>,
    pub pr_compliant: bool,
    /// Repository path of the shipped proof file for the conclusion.
    pub theorem: String,
    #[serde(serialize_with = "as_text")]
    pub conclusion: Formula,
    pub steps: Vec<DerivationStep>,
    pub skeleton: Vec<RuleTag>,
}

impl Diagnosis {
    pub fn safe(&self) -> bool {
        self.pre_s_holds
    }

    /// The semantic check agrees with the proved consequent.
    pub fn semantics_agree(&self) -> bool {
        self.pre_s_holds || (self.not_knows_pre_s && self.not_knows_not_knows_pre_s)
    }
}

/// Repository-relative path of the shipped neg-intro proof for a scenario.
pub fn proof_path(scenario: &str) -> String {
    format!("proofs/{scenario}_neg_intro_failure.proof")
}

/// Conjuncts of `pre_s`, with linked atoms replaced by their components.
pub fn safety_critical_facts(s: &Scenario, pre_s: &Formula) -> Vec<Formula> {
    let mut out = vec![];
    for c in pre_s.conjuncts() {
        match c {
            Formula::Atom(a) => match s.links.iter().find(|l| l.atom == *a) {
                Some(l) => out.extend(l.components.iter().map(|x| Formula::Atom(x.clone()))),
                None => out.push(c.clone()),
            },
            other => out.push(other.clone()),
        }
    }
    out
}

/// Which safety-critical facts the acting agent is missing when `act` was
/// executed at the actual world.
pub fn analyze_missing_information(s: &Scenario, act: &ActionRef) -> Result<Diagnosis, AnalysisError> {
    let structure = s
        .actions
        .get(&act.structure)
        .ok_or_else(|| AnalysisError::UnknownAction(act.structure.clone()))?;
    let tok = structure
        .token(&act.token)
        .ok_or_else(|| AnalysisError::UnknownAction(format!("{}.{}", act.structure, act.token)))?;
    let lib = &s.actions;
    let pm = PointedModel::actual(s.model.clone());
    let i = &act.agent;

    let pre_holds = satisfies(&pm, &tok.pre, lib)?;
    if !pre_holds {
        return Err(AnalysisError::NotExecuted(act.clone()));
    }
    let pre_s_holds = satisfies(&pm, &tok.pre_s, lib)?;

    let mut missing_facts = vec![];
    let mut per_fact = vec![];
    for fact in safety_critical_facts(s, &tok.pre_s) {
        if satisfies(&pm, &fact, lib)? {
            continue;
        }
        let name = match &fact {
            Formula::Atom(a) => a.clone(),
            other => AtomId::new(other.to_string()),
        };
        per_fact.push(FactVerdict {
            fact: name.clone(),
            sni: satisfies(&pm, &property_formula(SafetyProperty::Sni, i, &fact), lib)?,
            ud: satisfies(&pm, &property_formula(SafetyProperty::Ud, i, &fact), lib)?,
        });
        missing_facts.push(name);
    }

    let kp = Formula::knows(i.clone(), tok.pre_s.clone());
    let not_knows_pre_s = satisfies(&pm, &kp.clone().not(), lib)?;
    let not_knows_not_knows_pre_s = satisfies(&pm, &Formula::knows(i.clone(), kp.not()).not(), lib)?;

    let derivation = derive_neg_intro_failure(i, act, &tok.pre_s, lib)?;
    let pr = check_pr_compliance(&pm, structure, &act.token, i)?;
    Ok(Diagnosis {
        scenario: s.name.clone(),
        action: act.to_string(),
        pre_holds,
        pre_s_holds,
        missing_facts,
        not_knows_pre_s,
        not_knows_not_knows_pre_s,
        sni: satisfies(&pm, &property_formula(SafetyProperty::Sni, i, &tok.pre_s), lib)?,
        ud: satisfies(&pm, &property_formula(SafetyProperty::Ud, i, &tok.pre_s), lib)?,
        per_fact,
        pr_compliant: pr.compliant,
        theorem: proof_path(&s.name),
        conclusion: derivation.theorem.conclusion.clone(),
        skeleton: derivation.skeleton(),
        steps: derivation.steps,
    })
}

/// A proof shipped under `proofs/`.
#[derive(Clone, Debug)]
pub struct ShippedProof {
    /// File name relative to `proofs/`.
    pub file: String,
    /// Scenario whose action library the proof needs.
    pub scenario: Option<String>,
    pub theorem: CheckedTheorem,
}

impl ShippedProof {
    pub fn text(&self) -> String {
        print_proof(&self.theorem.proof, self.scenario.as_deref())
    }
}

/// Every library derivation, instantiated: the generic theorems for agent `i`
/// and atom `p`, the four consequences for AF447, and one neg-intro failure
/// per built-in scenario.
pub fn proof_catalogue() -> Result<Vec<ShippedProof>, AnalysisError> {
    let i = AgentId::new("i");
    let p = Formula::atom("p");
    let mut out = vec![
        ShippedProof {
            file: "belief_implies_possible.proof".into(),
            scenario: None,
            theorem: derive_belief_implies_possible(&i, &p)?,
        },
        ShippedProof {
            file: "ud_implies_sni.proof".into(),
            scenario: None,
            theorem: derive_ud_implies_sni(&i, &p)?,
        },
    ];
    let af = build_af447();
    let act = af.actual_action("Input1").expect("af447 has Input1");
    let pre_s = af.actions.token("Input1", &act.token).expect("token").pre_s.clone();
    for (n, t) in derive_safety_consequences(&act.agent, &act, &pre_s, &af.actions)?
        .into_iter()
        .enumerate()
    {
        out.push(ShippedProof {
            file: format!("af447_consequence{}.proof", n + 1),
            scenario: Some(af.name.clone()),
            theorem: t,
        });
    }
    for name in BUILTIN_NAMES {
        let s = builtin(name).expect("builtin");
        let structure = s.actions.iter().next().expect("one action").name().to_string();
        let act = s.actual_action(&structure).expect("actual token");
        let pre_s = s.actions.token(&structure, &act.token).expect("token").pre_s.clone();
        let d = derive_neg_intro_failure(&act.agent, &act, &pre_s, &s.actions)?;
        out.push(ShippedProof {
            file: proof_path(name).trim_start_matches("proofs/").to_string(),
            scenario: Some(name.to_string()),
            theorem: d.theorem,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn act(s: &Scenario) -> ActionRef {
        let structure = s.actions.iter().next().unwrap().name().to_string();
        s.actual_action(&structure).unwrap()
    }

    #[test]
    fn af447_diagnosis() {
        let s = build_af447();
        let d = analyze_missing_information(&s, &act(&s)).unwrap();
        assert!(d.pre_holds && !d.pre_s_holds);
        let names: Vec<&str> = d.missing_facts.iter().map(|a| a.as_str()).collect();
        assert_eq!(names, ["M_Normal", "InstrumentL_AirspeedCruise", "InstrumentM_AirspeedCruise"]);
        assert!(d.not_knows_pre_s && d.not_knows_not_knows_pre_s);
        assert!(!d.sni && !d.ud);
        assert!(d.pr_compliant);
    }

    #[test]
    fn copa_missing_middle_indicator() {
        let s = build_copa201();
        let d = analyze_missing_information(&s, &act(&s)).unwrap();
        assert_eq!(d.missing_facts, vec![AtomId::new("InstrumentM_HorLeft2")]);
    }

    #[test]
    fn safe_action_reports_nothing_missing() {
        let mut s = build_asiana214();
        // turn the autothrottle on in the actual world
        let m = &s.model;
        let mut b = KripkeModel::builder().actual(ACTUAL);
        for w in 0..m.world_count() {
            let mut atoms: Vec<AtomId> = m.true_atoms(w).iter().cloned().collect();
            atoms.push(AtomId::new(AT_ON));
            b = b.world(m.world(w).clone(), atoms);
        }
        for (a, rel) in m.relations() {
            b = b.agent(a.clone());
            for (x, y) in rel.k.pairs() {
                b = b.k(a.clone(), m.world(x).clone(), m.world(y).clone());
            }
            for (x, y) in rel.b.pairs() {
                b = b.b(a.clone(), m.world(x).clone(), m.world(y).clone());
            }
        }
        s.model = b.build().unwrap();
        let d = analyze_missing_information(&s, &act(&s)).unwrap();
        assert!(d.safe());
        assert!(d.missing_facts.is_empty());
    }

    #[test]
    fn scenarios_validate() {
        for name in BUILTIN_NAMES {
            assert_eq!(builtin(name).unwrap().validate(), Ok(()), "{name}");
        }
    }
}
