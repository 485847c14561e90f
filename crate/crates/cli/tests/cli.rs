//! End-to-end runs of the `dasl` binary: exit codes, golden output, and
//! robustness against malformed input.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn dasl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dasl"))
        .args(args)
        .current_dir(root())
        .env_remove("DASL_MAX_SEARCH")
        .output()
        .expect("spawn dasl")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap_or_else(|e| panic!("bad json ({e}): {}", stdout(o)))
}

/// Compares against `tests/golden/<name>`; `DASL_BLESS=1` rewrites it.
fn golden(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("DASL_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden {name}"));
    assert_eq!(actual, expected, "output drifted from {name}");
}

#[test]
fn demo_af447_lists_mode_among_missing_facts() {
    let o = dasl(&["demo", "af447"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    let missing = out.lines().find(|l| l.starts_with("missing facts:")).unwrap();
    assert!(missing.contains("M_Normal"), "{missing}");
    golden("demo_af447.txt", &out);
}

#[test]
fn demos_match_golden_text_and_json() {
    for name in ["af447", "copa201", "asiana214"] {
        let o = dasl(&["demo", name]);
        assert_eq!(code(&o), 0);
        golden(&format!("demo_{name}.txt"), &stdout(&o));
        let o = dasl(&["demo", name, "--json"]);
        assert_eq!(code(&o), 0);
        golden(&format!("demo_{name}.json"), &stdout(&o));
    }
}

#[test]
fn output_is_byte_stable() {
    let runs: &[&[&str]] = &[
        &["demo", "copa201", "--json"],
        &["search", "not atom p -> K i not atom p", "--max-worlds", "2", "--require", "rk_reflexive"],
        &["update", "crates/cli/tests/fixtures/update_fixture.dasl", "Act", "--json"],
        &["frames", "asiana214"],
    ];
    for args in runs {
        let a = dasl(args);
        let b = dasl(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(code(&a), code(&b));
    }
}

#[test]
fn undeclared_atom_is_a_usage_error_with_span() {
    let o = dasl(&["check", "scenarios/af447.dasl", "K Pilot (atom p)"]);
    assert_eq!(code(&o), 2);
    let err = stderr(&o);
    assert!(err.contains("undeclared atom `p`"), "{err}");
    assert!(err.contains("1:"), "{err}");
}

#[test]
fn countermodel_for_the_introspection_schema() {
    let f = "not (not (K i (atom p)) -> K i (not (K i (atom p))))";
    let o = dasl(&["search", f, "--max-worlds", "2", "--require", "rk_reflexive", "--json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["found"], true);
    // the negated schema is satisfiable, so its falsifier is any model of the schema
    let o = dasl(&["search", "not atom p -> K i not atom p", "--max-worlds", "2", "--require", "rk_reflexive", "--json"]);
    let v = json(&o);
    assert_eq!(v["world_count"], 2);
    golden("search_ud.json", &stdout(&o));
}

#[test]
fn exhausted_search_exits_one() {
    let o = dasl(&["search", "K i atom p -> atom p", "--max-worlds", "3", "--require", "rk_reflexive"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("no countermodel up to 3 world(s)"));
}

#[test]
fn oversized_search_names_the_flag() {
    let o = dasl(&["search", "atom p", "--max-worlds", "4"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("--max-worlds"), "{}", stderr(&o));
}

#[test]
fn check_exit_reflects_truth() {
    let o = dasl(&["check", "af447"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "executed: true\nunsafe: true\nneg_intro_failure: true\n");
    let o = dasl(&["check", "af447", "K Pilot atom M_Normal"]);
    assert_eq!(code(&o), 1);
    let o = dasl(&["check", "af447", "B Pilot atom M_Normal", "--world", "believed"]);
    assert_eq!(code(&o), 0);
    let o = dasl(&["check", "af447", "atom M_Normal", "--world", "nowhere"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn every_shipped_proof_checks() {
    let mut files: Vec<_> = std::fs::read_dir(root().join("proofs")).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert_eq!(files.len(), 9);
    for f in files {
        let o = dasl(&["prove", f.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}: {}", f.display(), stdout(&o));
    }
}

#[test]
fn rejected_proof_exits_one_with_path() {
    let dir = std::env::temp_dir().join(format!("dasl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.proof");
    std::fs::write(&bad, "(MP (K_T i (atom p)) (K_T i (atom q)))\n").unwrap();
    let o = dasl(&["prove", bad.to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 1, "{}{}", stdout(&o), stderr(&o));
    assert_eq!(json(&o)["valid"], false);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn update_matches_golden() {
    let o = dasl(&["update", "crates/cli/tests/fixtures/update_fixture.dasl", "Act"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    golden("update_fixture.txt", &stdout(&o));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec![],
        vec!["frobnicate"],
        vec!["demo", "titanic"],
        vec!["check", "/no/such/file.dasl"],
        vec!["search", "K i", "--max-worlds", "1"],
        vec!["search", "atom p", "--max-worlds", "1", "--require", "reflexive"],
        vec!["update", "af447", "NoSuchStructure"],
        vec!["prove", "/no/such.proof"],
    ] {
        let o = dasl(&args);
        assert_eq!(code(&o), 2, "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
    assert_eq!(code(&dasl(&["--help"])), 0);
    assert_eq!(code(&dasl(&["--version"])), 0);
}

#[test]
fn empty_scenario_expects_scenario_keyword() {
    let dir = std::env::temp_dir().join(format!("dasl-empty-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("empty.dasl");
    std::fs::write(&f, "").unwrap();
    let o = dasl(&["frames", f.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("expected 'scenario'"), "{}", stderr(&o));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn malformed_inputs_never_panic() {
    let dir = std::env::temp_dir().join(format!("dasl-junk-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let base = std::fs::read_to_string(root().join("scenarios/copa201.dasl")).unwrap();
    let cuts = [0, 1, base.len() / 3, base.len() / 2, base.len() - 2];
    for (k, cut) in cuts.into_iter().enumerate() {
        let mut cut = cut;
        while !base.is_char_boundary(cut) {
            cut -= 1;
        }
        let f = dir.join(format!("cut{k}.dasl"));
        std::fs::write(&f, &base[..cut]).unwrap();
        for cmd in ["check", "frames"] {
            let o = dasl(&[cmd, f.to_str().unwrap()]);
            assert_eq!(code(&o), 2, "cut at {cut}: {}", stderr(&o));
        }
    }
    std::fs::write(dir.join("bin.proof"), [0xff, 0xfe, 0x00, 0x28]).unwrap();
    let o = dasl(&["prove", dir.join("bin.proof").to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    std::fs::remove_dir_all(dir).unwrap();
}
