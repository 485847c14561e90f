#![allow(dead_code)]

use proptest::prelude::*;

use dasl::{ActionRef, Formula, KripkeModel};

pub const ATOMS: [&str; 3] = ["p", "q", "r"];
pub const AGENTS: [&str; 2] = ["a", "b"];

/// Static formulas over `ATOMS` and `AGENTS`, sugar included.
pub fn static_formula() -> impl Strategy<Value = Formula> {
    static_formula_over(&ATOMS, &AGENTS)
}

pub fn static_formula_over(atoms: &[&'static str], agents: &[&'static str]) -> impl Strategy<Value = Formula> {
    let atoms = atoms.to_vec();
    let agents = agents.to_vec();
    let leaf = prop_oneof![
        6 => prop::sample::select(atoms).prop_map(Formula::atom),
        1 => Just(Formula::True),
        1 => Just(Formula::False),
    ];
    leaf.prop_recursive(5, 40, 2, move |inner| {
        let agent = prop::sample::select(agents.clone());
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| x.and(y)),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| x.or(y)),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| x.implies(y)),
            (agent.clone(), inner.clone()).prop_map(|(i, f)| Formula::knows(i, f)),
            (agent.clone(), inner.clone()).prop_map(|(i, f)| Formula::believes(i, f)),
            (agent.clone(), inner.clone()).prop_map(|(i, f)| Formula::knows_possible(i, f)),
            (agent, inner).prop_map(|(i, f)| Formula::believes_possible(i, f)),
        ]
    })
}

/// Formulas that may also mention the given actions.
pub fn dynamic_formula(acts: Vec<ActionRef>) -> impl Strategy<Value = Formula> {
    static_formula().prop_recursive(2, 30, 2, move |inner| {
        let act = prop::sample::select(acts.clone());
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| x.and(y)),
            (act.clone(), inner.clone()).prop_map(|(a, f)| Formula::after(a, f)),
            (act.clone(), inner.clone()).prop_map(|(a, f)| Formula::after_safe(a, f)),
            (act.clone(), inner.clone()).prop_map(|(a, f)| Formula::can_act(a, f)),
            (act, inner).prop_map(|(a, f)| Formula::can_act_safely(a, f)),
        ]
    })
}

/// Arbitrary (unconstrained) models on 1 to `max` worlds over `ATOMS` and
/// `AGENTS`, actual world `w0`.
pub fn model(max: usize) -> impl Strategy<Value = KripkeModel> {
    (1..=max).prop_flat_map(|n| {
        let rels = prop::collection::vec(prop::collection::vec(any::<bool>(), n * n), 2 * AGENTS.len());
        let val = prop::collection::vec(prop::collection::vec(any::<bool>(), ATOMS.len()), n);
        (Just(n), rels, val).prop_map(|(n, rels, val)| build(n, &rels, &val))
    })
}

fn build(n: usize, rels: &[Vec<bool>], val: &[Vec<bool>]) -> KripkeModel {
    let name = |w: usize| format!("w{w}");
    let mut b = KripkeModel::builder().actual("w0");
    for (w, bits) in val.iter().enumerate() {
        let atoms: Vec<&str> = ATOMS.iter().zip(bits).filter(|(_, &t)| t).map(|(a, _)| *a).collect();
        b = b.world(name(w).as_str(), atoms);
    }
    for (ai, agent) in AGENTS.iter().enumerate() {
        b = b.agent(*agent);
        for x in 0..n {
            for y in 0..n {
                if rels[2 * ai][x * n + y] {
                    b = b.k(*agent, name(x).as_str(), name(y).as_str());
                }
                if rels[2 * ai + 1][x * n + y] {
                    b = b.b(*agent, name(x).as_str(), name(y).as_str());
                }
            }
        }
    }
    b.build().expect("generated model is well-formed")
}
