//! docs/grammar.ebnf stays in sync with the lexer and parser tables.

use std::collections::BTreeSet;
use std::path::PathBuf;

use dasl::dsl::{FORMULA_KEYWORDS, PUNCTUATION, SCENARIO_KEYWORDS};
use dasl::RuleTag;

fn grammar() -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/grammar.ebnf");
    std::fs::read_to_string(p).unwrap()
}

/// Quoted terminals outside `(* ... *)` comments.
fn terminals(src: &str) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let mut rest = src;
    let mut text = String::new();
    while let Some(i) = rest.find("(*") {
        text.push_str(&rest[..i]);
        let j = rest[i..].find("*)").expect("unterminated comment");
        rest = &rest[i + j + 2..];
    }
    text.push_str(rest);
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        if c == '"' {
            let t: String = chars.by_ref().take_while(|&c| c != '"').collect();
            out.insert(t);
        }
    }
    out
}

#[test]
fn terminals_match_tables() {
    let found = terminals(&grammar());
    let mut expected: BTreeSet<String> = PUNCTUATION.iter().map(|s| s.to_string()).collect();
    expected.extend(FORMULA_KEYWORDS.iter().map(|s| s.to_string()));
    expected.extend(SCENARIO_KEYWORDS.iter().map(|s| s.to_string()));
    expected.extend(RuleTag::ALL.iter().map(|t| t.name().to_string()));
    let missing: Vec<_> = expected.difference(&found).collect();
    let extra: Vec<_> = found.difference(&expected).collect();
    assert!(missing.is_empty() && extra.is_empty(), "missing {missing:?}, extra {extra:?}");
}

#[test]
fn formula_keyword_production_matches() {
    let g = grammar();
    let start = g.find("formula_keyword =").unwrap();
    let end = start + g[start..].find(';').unwrap();
    let listed = terminals(&g[start..end]);
    let table: BTreeSet<String> = FORMULA_KEYWORDS.iter().map(|s| s.to_string()).collect();
    assert_eq!(listed, table);
}
