use std::fmt::Write;

use crate::relation::Relation;
use crate::scenario::Scenario;

fn pairs(r: &Relation, name: impl Fn(usize) -> String) -> String {
    r.pairs()
        .map(|(a, b)| format!("({}, {})", name(a), name(b)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn relation_line(out: &mut String, indent: &str, op: &str, agent: &str, body: &str) {
    if body.is_empty() {
        let _ = writeln!(out, "{indent}{op} {agent}: ;");
    } else {
        let _ = writeln!(out, "{indent}{op} {agent}: {body};");
    }
}

/// Canonical text for a scenario. Parsing the output gives back an equal
/// scenario.
pub fn print_scenario(s: &Scenario) -> String {
    let mut out = String::new();
    let m = &s.model;
    let _ = writeln!(out, "scenario {} {{", s.name);
    if s.raw {
        out.push_str("  raw;\n");
    }
    let join = |v: Vec<&str>| v.join(", ");
    let _ = writeln!(out, "  agents: {};", join(s.agents.iter().map(|a| a.as_str()).collect()));
    let _ = writeln!(out, "  atoms: {};", join(s.atoms.iter().map(|a| a.as_str()).collect()));
    for l in &s.links {
        let rhs: Vec<&str> = l.components.iter().map(|c| c.as_str()).collect();
        let _ = writeln!(out, "  link {} := {};", l.atom, rhs.join(" and "));
    }
    out.push('\n');
    for w in 0..m.world_count() {
        let atoms: Vec<&str> = m.true_atoms(w).iter().map(|a| a.as_str()).collect();
        if atoms.is_empty() {
            let _ = writeln!(out, "  world {} {{ }}", m.world(w));
        } else {
            let _ = writeln!(out, "  world {} {{ {} }}", m.world(w), atoms.join(", "));
        }
    }
    let wname = |i: usize| m.world(i).to_string();
    for a in &s.agents {
        if let Some(r) = m.agent_relations(a) {
            relation_line(&mut out, "  ", "K", a.as_str(), &pairs(&r.k, wname));
            relation_line(&mut out, "  ", "B", a.as_str(), &pairs(&r.b, wname));
        }
    }
    let _ = writeln!(out, "  actual: {};", m.actual_world());
    for act in s.actions.iter() {
        let _ = writeln!(out, "\n  action {} for {} {{", act.name(), act.actor());
        for t in act.tokens() {
            let _ = writeln!(out, "    token {} {{", t.name);
            let _ = writeln!(out, "      pre: {};", t.pre);
            let _ = writeln!(out, "      pre_s: {};", t.pre_s);
            if !t.post.is_empty() {
                let assigns: Vec<String> = t.post.iter().map(|(a, v)| format!("{a} := {v}")).collect();
                let _ = writeln!(out, "      post: {{ {} }};", assigns.join(", "));
            }
            out.push_str("    }\n");
        }
        let tname = |i: usize| act.tokens()[i].name.clone();
        for (a, r) in act.relations() {
            relation_line(&mut out, "    ", "K", a.as_str(), &pairs(&r.k, tname));
            relation_line(&mut out, "    ", "B", a.as_str(), &pairs(&r.b, tname));
        }
        let _ = writeln!(out, "    actual: {};", act.actual().name);
        out.push_str("  }\n");
    }
    if !s.definitions.is_empty() {
        out.push('\n');
    }
    for (n, f) in &s.definitions {
        let _ = writeln!(out, "  define {n} := {f};");
    }
    if !s.queries.is_empty() {
        out.push('\n');
    }
    for (n, f) in &s.queries {
        let _ = writeln!(out, "  query {n}: {f};");
    }
    out.push_str("}\n");
    out
}
