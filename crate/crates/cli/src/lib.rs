//! Command-line front end. [`run`] does all the work and returns the bytes
//! to print, so the binary is a thin wrapper and tests can call it directly.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use dasl::aviation::{self, analyze_missing_information, AnalysisError, Diagnosis};
use dasl::dsl::parse_formula_in;
use dasl::proof::{parse_proof, ProofContext};
use dasl::search::{find_countermodel_guarded, SearchBounds, SearchError, SearchGuard, SearchOutcome};
use dasl::semantics::UpdateOptions;
use dasl::{
    check_frames, check_proof, parse_formula, resugar, parse_scenario, satisfies, update, ActionRef, DslError,
    FrameCondition, KripkeModel, PointedModel, Scenario, WorldId,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "dasl", version, about = "Dynamic agent safety logic toolkit")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a formula, or every query of the scenario, at a world.
    Check {
        /// A `.dasl` file or a built-in scenario name.
        scenario: String,
        formula: Option<String>,
        /// World of evaluation; defaults to the actual world.
        #[arg(long)]
        world: Option<String>,
    },
    /// Check the frame conditions of a scenario's model.
    Frames { scenario: String },
    /// Apply an action (`Structure` or `Structure.token`) to the model.
    Update {
        scenario: String,
        action: String,
        #[arg(long)]
        world: Option<String>,
        /// Keep worlds unreachable from the new actual world.
        #[arg(long)]
        keep_unreachable: bool,
    },
    /// Check a proof file.
    Prove {
        file: String,
        /// Scenario supplying the action library; overrides the file header.
        #[arg(long)]
        scenario: Option<String>,
    },
    /// Bounded countermodel search for a static formula.
    Search {
        #[arg(conflicts_with = "formula_flag", required_unless_present = "formula_flag")]
        formula: Option<String>,
        #[arg(long = "formula", value_name = "FORMULA")]
        formula_flag: Option<String>,
        #[arg(long)]
        max_worlds: Option<usize>,
        /// Frame conditions, comma separated or repeated. `all` for every one.
        #[arg(long, value_delimiter = ',')]
        require: Vec<String>,
    },
    /// Missing-safety-information diagnosis for an executed action.
    Analyze { scenario: String, action: String },
    /// Run the diagnosis on a built-in scenario.
    Demo { name: String },
}

/// What a run produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunReport {
    pub exit: i32,
    pub stdout: String,
    pub stderr: String,
}

impl RunReport {
    fn ok(stdout: String, holds: bool) -> Self {
        Self {
            exit: if holds { EXIT_OK } else { EXIT_CHECK_FAILED },
            stdout,
            stderr: String::new(),
        }
    }
}

#[derive(Debug)]
enum Failure {
    /// Bad flags, unreadable input, parse or name errors.
    Usage(String),
    Internal(String),
}

impl From<DslError> for Failure {
    fn from(e: DslError) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Out = Result<RunReport, Failure>;

/// Runs one command line. `args[0]` is the program name.
pub fn run<I, T>(args: I) -> RunReport
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    RunReport::ok(text, true)
                }
                _ => RunReport {
                    exit: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let json = cli.json;
    let result = std::panic::catch_unwind(|| dispatch(cli.command, json));
    let (exit, message) = match result {
        Ok(Ok(r)) => return r,
        Ok(Err(Failure::Usage(m))) => (EXIT_USAGE, m),
        Ok(Err(Failure::Internal(m))) => (EXIT_INTERNAL, format!("internal error: {m}")),
        Err(_) => (EXIT_INTERNAL, "internal error: panic".to_string()),
    };
    RunReport {
        exit,
        stdout: String::new(),
        stderr: format!("error: {message}\n"),
    }
}

fn dispatch(cmd: Command, json: bool) -> Out {
    match cmd {
        Command::Check {
            scenario,
            formula,
            world,
        } => cmd_check(&scenario, formula.as_deref(), world.as_deref(), json),
        Command::Frames { scenario } => cmd_frames(&scenario, json),
        Command::Update {
            scenario,
            action,
            world,
            keep_unreachable,
        } => cmd_update(&scenario, &action, world.as_deref(), !keep_unreachable, json),
        Command::Prove { file, scenario } => cmd_prove(&file, scenario.as_deref(), json),
        Command::Search {
            formula,
            formula_flag,
            max_worlds,
            require,
        } => {
            let f = formula.or(formula_flag).unwrap_or_default();
            cmd_search(&f, max_worlds, &require, json)
        }
        Command::Analyze { scenario, action } => {
            let s = load_scenario(&scenario)?;
            let act = resolve_action(&s, &action)?;
            cmd_analyze(&s, &act, json, false)
        }
        Command::Demo { name } => {
            let s = aviation::builtin(&name).ok_or_else(|| {
                Failure::Usage(format!(
                    "unknown demo `{name}`; expected one of {}",
                    aviation::BUILTIN_NAMES.join(", ")
                ))
            })?;
            let structure = s.actions.iter().next().map(|a| a.name().to_string());
            let act = structure
                .and_then(|st| s.actual_action(&st))
                .ok_or_else(|| Failure::Internal(format!("{name} has no action")))?;
            cmd_analyze(&s, &act, json, true)
        }
    }
}

/// A built-in name, a path, or a path whose stem is a built-in name.
fn load_scenario(arg: &str) -> Result<Scenario, Failure> {
    if let Some(s) = aviation::builtin(arg) {
        return Ok(s);
    }
    let path = Path::new(arg);
    match std::fs::read_to_string(path) {
        Ok(text) => Ok(parse_scenario(&text)?),
        Err(e) => {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
            if path.extension().is_some_and(|x| x == "dasl") {
                if let Some(s) = aviation::builtin(stem) {
                    return Ok(s);
                }
            }
            Err(Failure::Usage(format!("cannot read scenario `{arg}`: {e}")))
        }
    }
}

/// `Structure` (its actual token) or `Structure.token`.
fn resolve_action(s: &Scenario, arg: &str) -> Result<ActionRef, Failure> {
    let found = match arg.split_once('.') {
        Some((st, tok)) => s.action_ref(st, tok),
        None => s.actual_action(arg),
    };
    found.ok_or_else(|| Failure::Usage(format!("unknown action `{arg}` in scenario `{}`", s.name)))
}

fn resolve_world(m: &KripkeModel, w: Option<&str>) -> Result<usize, Failure> {
    match w {
        None => Ok(m.actual()),
        Some(name) => m
            .world_index(&WorldId::base(name))
            .ok_or_else(|| Failure::Usage(format!("unknown world `{name}`"))),
    }
}

fn render(json: bool, value: Value, text: String) -> String {
    if json {
        let mut s = serde_json::to_string_pretty(&value).expect("json values serialize");
        s.push('\n');
        s
    } else {
        text
    }
}

fn internal<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Internal(e.to_string())
}

fn cmd_check(scenario: &str, formula: Option<&str>, world: Option<&str>, json: bool) -> Out {
    let s = load_scenario(scenario)?;
    let w = resolve_world(&s.model, world)?;
    let pm = PointedModel {
        model: s.model.clone(),
        world: w,
    };
    let items: Vec<(String, dasl::Formula)> = match formula {
        Some(src) => vec![(src.to_string(), parse_formula_in(src, &s)?)],
        None => s.queries.clone(),
    };
    let mut results = vec![];
    let mut text = String::new();
    let mut all = true;
    for (name, f) in &items {
        let holds = satisfies(&pm, f, &s.actions).map_err(|e| Failure::Usage(e.to_string()))?;
        all &= holds;
        writeln!(text, "{name}: {holds}").unwrap();
        results.push(json!({"name": name, "formula": f.to_string(), "holds": holds}));
    }
    let value = json!({
        "command": "check",
        "scenario": s.name,
        "world": pm.world_id(),
        "results": results,
        "holds": all,
    });
    Ok(RunReport::ok(render(json, value, text), all))
}

fn cmd_frames(scenario: &str, json: bool) -> Out {
    let s = load_scenario(scenario)?;
    let report = check_frames(&s.model);
    let mut text = String::new();
    for (agent, r) in &report.agents {
        for c in FrameCondition::ALL {
            let res = r.get(c);
            if res.holds {
                writeln!(text, "{agent} {c}: ok").unwrap();
            } else {
                let ws: Vec<String> = res
                    .witnesses
                    .iter()
                    .map(|t| format!("({})", t.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(",")))
                    .collect();
                writeln!(text, "{agent} {c}: FAIL {}", ws.join(" ")).unwrap();
            }
        }
    }
    let holds = report.all_hold();
    let value = json!({"command": "frames", "scenario": s.name, "holds": holds, "agents": report});
    Ok(RunReport::ok(render(json, value, text), holds))
}

/// Text form of a model: worlds with their true atoms, then relations.
pub fn model_text(m: &KripkeModel) -> String {
    let mut out = String::new();
    for w in 0..m.world_count() {
        let atoms: Vec<&str> = m.true_atoms(w).iter().map(|a| a.as_str()).collect();
        let mark = if w == m.actual() { " (actual)" } else { "" };
        let body = if atoms.is_empty() { "{}".to_string() } else { format!("{{ {} }}", atoms.join(", ")) };
        writeln!(out, "world {}{mark} {body}", m.world(w)).unwrap();
    }
    for (agent, r) in m.relations() {
        for (label, rel) in [("K", &r.k), ("B", &r.b)] {
            let pairs: Vec<String> = rel
                .pairs()
                .map(|(x, y)| format!("({}, {})", m.world(x), m.world(y)))
                .collect();
            writeln!(out, "{label} {agent}: {}", pairs.join(", ")).unwrap();
        }
    }
    out
}

fn cmd_update(scenario: &str, action: &str, world: Option<&str>, gc: bool, json: bool) -> Out {
    let s = load_scenario(scenario)?;
    let act = resolve_action(&s, action)?;
    let w = resolve_world(&s.model, world)?;
    let structure = s.actions.get(&act.structure).ok_or_else(|| internal("resolved action vanished"))?;
    let opts = UpdateOptions { collect_garbage: gc };
    match update(&s.model, structure, s.model.world(w), &act.token, &act.agent, opts) {
        Ok(pm) => {
            let text = format!("update by {act}\n{}", model_text(&pm.model));
            let value = json!({"command": "update", "action": act.to_string(), "defined": true, "model": pm.model.to_json()});
            Ok(RunReport::ok(render(json, value, text), true))
        }
        Err(dasl::semantics::SemanticsError::PreconditionUnsatisfied { token, world }) => {
            let text = format!("update by {act} undefined: pre({token}) fails at {world}\n");
            let value = json!({"command": "update", "action": act.to_string(), "defined": false});
            Ok(RunReport::ok(render(json, value, text), false))
        }
        Err(e) => Err(Failure::Usage(e.to_string())),
    }
}

fn cmd_prove(file: &str, scenario: Option<&str>, json: bool) -> Out {
    let text = std::fs::read_to_string(file).map_err(|e| Failure::Usage(format!("cannot read `{file}`: {e}")))?;
    let pf = parse_proof(&text)?;
    let scen = match scenario.map(str::to_string).or(pf.scenario.clone()) {
        Some(name) => Some(load_scenario(&name)?),
        None => None,
    };
    let ctx = match &scen {
        Some(s) => ProofContext::new(&s.actions),
        None => ProofContext::empty(),
    };
    match check_proof(&pf.proof, &ctx) {
        Ok(concl) => {
            let rules: Vec<&str> = pf.proof.cited_rules().iter().map(|t| t.name()).collect();
            let out = format!(
                "checked: {}\nnodes: {}\nrules: {}\n",
                resugar(&concl),
                pf.proof.node_count(),
                rules.join(", ")
            );
            let value = json!({
                "command": "prove",
                "file": file,
                "valid": true,
                "conclusion": concl.to_string(),
                "nodes": pf.proof.node_count(),
                "rules": rules,
            });
            Ok(RunReport::ok(render(json, value, out), true))
        }
        Err(e) => {
            let path: String = e.path.iter().map(|i| format!("/{i}")).collect();
            let path = if path.is_empty() { "/".to_string() } else { path };
            let out = format!("rejected: {e}\n");
            let value = json!({
                "command": "prove",
                "file": file,
                "valid": false,
                "path": path,
                "rule": e.rule.name(),
                "error": e.to_string(),
            });
            Ok(RunReport::ok(render(json, value, out), false))
        }
    }
}

fn parse_conditions(names: &[String]) -> Result<BTreeSet<FrameCondition>, Failure> {
    let mut out = BTreeSet::new();
    for n in names.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
        if n == "all" {
            out.extend(FrameCondition::ALL);
            continue;
        }
        out.insert(n.parse().map_err(|e| Failure::Usage(format!("--require: {e}")))?);
    }
    Ok(out)
}

fn cmd_search(src: &str, max_worlds: Option<usize>, require: &[String], json: bool) -> Out {
    let f = parse_formula(src)?;
    let guard = SearchGuard::from_env();
    let n = max_worlds.unwrap_or(guard.max_worlds);
    let bounds = SearchBounds::for_formula(&f, n, parse_conditions(require)?);
    let outcome = find_countermodel_guarded(&f, &bounds, &guard).map_err(|e| match e {
        SearchError::BoundsTooLarge(_) | SearchError::NoWorlds => Failure::Usage(format!("--max-worlds: {e}")),
        other => Failure::Usage(other.to_string()),
    })?;
    let conditions: Vec<&str> = bounds.constraints.iter().map(|c| c.name()).collect();
    match outcome {
        SearchOutcome::Found { countermodel, examined } => {
            let text = format!(
                "countermodel: {} world(s), falsified at {} ({examined} models examined)\n{}",
                countermodel.world_count,
                countermodel.world,
                model_text(&countermodel.model)
            );
            let value = json!({
                "command": "search",
                "formula": f.to_string(),
                "require": conditions,
                "found": true,
                "examined": examined,
                "world": countermodel.world,
                "world_count": countermodel.world_count,
                "model": countermodel.model.to_json(),
            });
            Ok(RunReport::ok(render(json, value, text), true))
        }
        SearchOutcome::Exhausted { examined, max_worlds } => {
            let text = format!("no countermodel up to {max_worlds} world(s) ({examined} models examined)\n");
            let value = json!({
                "command": "search",
                "formula": f.to_string(),
                "require": conditions,
                "found": false,
                "examined": examined,
                "max_worlds": max_worlds,
            });
            Ok(RunReport::ok(render(json, value, text), false))
        }
    }
}

fn diagnosis_text(d: &Diagnosis, with_steps: bool) -> String {
    let mut t = String::new();
    writeln!(t, "scenario: {}", d.scenario).unwrap();
    writeln!(t, "action: {}", d.action).unwrap();
    writeln!(t, "pre holds: {}", d.pre_holds).unwrap();
    writeln!(t, "pre_s holds: {}", d.pre_s_holds).unwrap();
    if d.safe() {
        writeln!(t, "safe action: no safety-critical information missing").unwrap();
        return t;
    }
    let facts: Vec<&str> = d.missing_facts.iter().map(|a| a.as_str()).collect();
    writeln!(t, "missing facts: {}", facts.join(", ")).unwrap();
    for v in &d.per_fact {
        let verdict = |b: bool| if b { "satisfied" } else { "violated" };
        writeln!(t, "  {}: SNI {}, UD {}", v.fact, verdict(v.sni), verdict(v.ud)).unwrap();
    }
    writeln!(t, "not K pre_s: {}", d.not_knows_pre_s).unwrap();
    writeln!(t, "not K not K pre_s: {}", d.not_knows_not_knows_pre_s).unwrap();
    writeln!(t, "SNI: {}", if d.sni { "satisfied" } else { "violated" }).unwrap();
    writeln!(t, "UD: {}", if d.ud { "satisfied" } else { "violated" }).unwrap();
    writeln!(t, "theorem: {}", resugar(&d.conclusion)).unwrap();
    writeln!(t, "proof: {}", d.theorem).unwrap();
    if with_steps {
        for s in &d.steps {
            let rules: Vec<&str> = s.rules.iter().map(|r| r.name()).collect();
            let rules = match (rules.is_empty(), s.number <= 2) {
                (false, _) => rules.join(", "),
                (true, true) => "hypothesis".to_string(),
                (true, false) => "propositional".to_string(),
            };
            writeln!(t, "  ({}) {}   [{rules}]", s.number, s.statement).unwrap();
        }
    }
    t
}

fn cmd_analyze(s: &Scenario, act: &ActionRef, json: bool, with_steps: bool) -> Out {
    match analyze_missing_information(s, act) {
        Ok(d) => {
            if !d.semantics_agree() {
                return Err(Failure::Internal(format!(
                    "semantic check disagrees with the derived theorem in {}",
                    s.name
                )));
            }
            let mut value = serde_json::to_value(&d).map_err(internal)?;
            value["command"] = json!(if with_steps { "demo" } else { "analyze" });
            Ok(RunReport::ok(render(json, value, diagnosis_text(&d, with_steps)), true))
        }
        Err(AnalysisError::NotExecuted(a)) => {
            let text = format!("action {a} was not executed: pre fails at the actual world\n");
            let value = json!({"command": "analyze", "action": a.to_string(), "pre_holds": false});
            Ok(RunReport::ok(render(json, value, text), false))
        }
        Err(e @ AnalysisError::UnknownAction(_)) => Err(Failure::Usage(e.to_string())),
        Err(e) => Err(internal(e)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> RunReport {
        run(std::iter::once("dasl").chain(args.iter().copied()))
    }

    #[test]
    fn conditions_accept_all_and_short_names() {
        let all = parse_conditions(&["all".into()]).unwrap();
        assert_eq!(all.len(), 7);
        let some = parse_conditions(&["ep2".into(), " rk_reflexive ".into(), String::new()]).unwrap();
        assert_eq!(some.len(), 2);
        assert!(matches!(parse_conditions(&["reflexive".into()]), Err(Failure::Usage(_))));
    }

    #[test]
    fn actions_resolve_with_or_without_token() {
        let s = aviation::builtin("copa201").unwrap();
        let a = resolve_action(&s, "RollInput").unwrap();
        assert_eq!(a, resolve_action(&s, "RollInput.HardWingRight").unwrap());
        assert!(resolve_action(&s, "RollInput.Nope").is_err());
    }

    #[test]
    fn dasl_path_falls_back_to_builtin_stem() {
        let s = load_scenario("somewhere/else/asiana214.dasl").unwrap();
        assert_eq!(s.name, "asiana214");
        assert!(matches!(load_scenario("nope.txt"), Err(Failure::Usage(_))));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_args(&["check", "af447"]).exit, EXIT_OK);
        assert_eq!(run_args(&["check", "af447", "K Pilot atom M_Normal"]).exit, EXIT_CHECK_FAILED);
        assert_eq!(run_args(&["check", "af447", "K Pilot"]).exit, EXIT_USAGE);
        assert_eq!(run_args(&["--help"]).exit, EXIT_OK);
    }

    #[test]
    fn empty_valuation_prints_braces() {
        let s = aviation::builtin("af447").unwrap();
        let pm = update(
            &s.model,
            s.actions.iter().next().unwrap(),
            &WorldId::base(aviation::ACTUAL),
            "HardNoseUp",
            &"Pilot".into(),
            UpdateOptions::default(),
        )
        .unwrap();
        let text = model_text(&pm.model);
        assert!(text.starts_with("world "), "{text}");
        assert!(!text.contains("{  }"));
    }
}
