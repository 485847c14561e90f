//! Text formats: formulas, scenario files and their printer.
//!
//! Formulas use words rather than symbols: `not`, `and`, `or`, `->`,
//! `K i f`, `B i f`, `Khat i f`, `Bhat i f`, `[i, A.t] f`, `[i, A.t, S] f`,
//! `<i, A.t> f`, `<i, A.t, S> f`, `atom p`, `true`, `false`. A bare
//! identifier names a definition or, failing that, an atom.

pub(crate) mod lexer;
mod parser;
mod printer;

use std::fmt;

use thiserror::Error;

pub use lexer::PUNCTUATION;
pub use parser::{parse_formula, parse_formula_in, parse_scenario, FORMULA_KEYWORDS, SCENARIO_KEYWORDS};
pub(crate) use parser::Parser;
pub use printer::print_scenario;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DslError {
    #[error("{span}: lexical error: {message}")]
    Lex { span: Span, message: String },
    #[error("{span}: syntax error: expected {}, found {found}", .expected.join(" or "))]
    Syntax {
        span: Span,
        expected: Vec<String>,
        found: String,
    },
    #[error("{span}: name error: {message}")]
    Name { span: Span, message: String },
    #[error("{span}: invariant violated: {message}")]
    Invariant { span: Span, message: String },
}

impl DslError {
    pub fn span(&self) -> Span {
        match self {
            DslError::Lex { span, .. }
            | DslError::Syntax { span, .. }
            | DslError::Name { span, .. }
            | DslError::Invariant { span, .. } => *span,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            DslError::Lex { .. } => "lexical",
            DslError::Syntax { .. } => "syntax",
            DslError::Name { .. } => "name",
            DslError::Invariant { .. } => "invariant",
        }
    }
}

/// A parsed `.dasl` file.
pub type ScenarioDocument = crate::scenario::Scenario;
