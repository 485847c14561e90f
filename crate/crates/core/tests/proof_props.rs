//! Mutated proofs: whatever still checks must be sound.

use proptest::prelude::*;

use dasl::proof::{derive_belief_implies_possible, derive_ud_implies_sni, parse_proof, print_proof, ProofContext};
use dasl::search::{find_countermodel, SearchBounds, SearchOutcome};
use dasl::{check_proof, AgentId, FrameCondition, Formula};

const REPLACEMENTS: [&str; 14] = [
    "p", "q", "i", "j", "not", "K", "B", "K_T", "B_K", "K_B", "MP", "Taut", "And_Intro", "B_Serial",
];

fn sources() -> Vec<(String, Formula)> {
    let i = AgentId::new("i");
    let p = Formula::atom("p");
    [derive_belief_implies_possible(&i, &p).unwrap(), derive_ud_implies_sni(&i, &p).unwrap()]
        .into_iter()
        .map(|t| (print_proof(&t.proof, None), t.conclusion))
        .collect()
}

/// Splits into identifier and non-identifier runs.
fn tokens(src: &str) -> Vec<String> {
    let mut out: Vec<String> = vec![];
    let word = |c: char| c.is_alphanumeric() || c == '_';
    for c in src.chars() {
        match out.last_mut() {
            Some(last) if last.chars().next().map(word) == Some(word(c)) => last.push(c),
            _ => out.push(c.to_string()),
        }
    }
    out
}

#[derive(Clone, Debug)]
enum Mutation {
    Replace(usize, &'static str),
    Delete(usize),
    Swap(usize, usize),
    /// Every occurrence of one word becomes another.
    Rename(&'static str, &'static str),
}

fn mutate(src: &str, muts: &[Mutation]) -> String {
    let mut toks = tokens(src);
    let words: Vec<usize> = (0..toks.len())
        .filter(|&k| toks[k].chars().all(|c| c.is_alphanumeric() || c == '_'))
        .collect();
    for m in muts {
        match *m {
            Mutation::Replace(k, w) => toks[words[k % words.len()]] = w.to_string(),
            Mutation::Delete(k) => toks[words[k % words.len()]].clear(),
            Mutation::Swap(a, b) => toks.swap(words[a % words.len()], words[b % words.len()]),
            Mutation::Rename(from, to) => {
                for t in toks.iter_mut().filter(|t| t.as_str() == from) {
                    *t = to.to_string();
                }
            }
        }
    }
    toks.concat()
}

fn mutation() -> impl Strategy<Value = Mutation> {
    prop_oneof![
        4 => (any::<usize>(), prop::sample::select(REPLACEMENTS.to_vec())).prop_map(|(k, w)| Mutation::Replace(k, w)),
        1 => any::<usize>().prop_map(Mutation::Delete),
        1 => (any::<usize>(), any::<usize>()).prop_map(|(a, b)| Mutation::Swap(a, b)),
        2 => (
            prop::sample::select(vec!["p", "i", "K", "B", "not"]),
            prop::sample::select(vec!["q", "j", "K", "B", "not"]),
        )
            .prop_map(|(a, b)| Mutation::Rename(a, b)),
    ]
}

/// `None` when the formula's vocabulary exceeds the search guard.
fn valid_up_to_three_worlds(f: &Formula) -> Option<bool> {
    let b = SearchBounds::for_formula(f, 3, FrameCondition::all());
    match find_countermodel(f, &b) {
        Ok(outcome) => Some(matches!(outcome, SearchOutcome::Exhausted { .. })),
        Err(_) => None,
    }
}

#[test]
fn mutants_that_check_are_sound() {
    use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
    use std::cell::Cell;

    let sources = sources();
    let changed = Cell::new(0usize);
    let rejected = Cell::new(0usize);
    let config = Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let strategy = (0usize..2, prop::collection::vec(mutation(), 1..4));
    runner
        .run(&strategy, |(which, muts)| {
            let (src, original) = &sources[which];
            let text = mutate(src, &muts);
            let Ok(file) = parse_proof(&text) else { return Ok(()) };
            let Ok(concl) = check_proof(&file.proof, &ProofContext::empty()) else {
                rejected.set(rejected.get() + 1);
                return Ok(());
            };
            if concl != *original {
                changed.set(changed.get() + 1);
                prop_assert!(valid_up_to_three_worlds(&concl) != Some(false), "mutant proves invalid {concl}\n{text}");
            }
            let reprinted = parse_proof(&print_proof(&file.proof, None)).unwrap();
            prop_assert_eq!(check_proof(&reprinted.proof, &ProofContext::empty()).unwrap(), concl);
            Ok(())
        })
        .unwrap();
    eprintln!(
        "mutated proofs: {} rejected by the checker, {} checked with a new (valid) conclusion",
        rejected.get(),
        changed.get()
    );
    assert!(rejected.get() > 50 && changed.get() > 5, "mutation mix became vacuous");
}

#[test]
fn originals_check() {
    for (src, concl) in sources() {
        let file = parse_proof(&src).unwrap();
        assert_eq!(check_proof(&file.proof, &ProofContext::empty()).unwrap(), concl);
    }
}
