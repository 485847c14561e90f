//! Dynamic agent safety logic.
//!
//! Finite Kripke models with knowledge and belief relations, action
//! structures carrying both a precondition and a safety precondition, the
//! product update, a Hilbert-style proof checker, bounded countermodel
//! search, and an aviation case-study layer built on top.

pub mod action;
pub mod aviation;
pub mod dsl;
pub mod formula;
pub mod kripke;
pub mod proof;
pub mod relation;
pub mod scenario;
pub mod search;
pub mod semantics;

pub use action::{ActionLibrary, ActionStructure, ActionToken};
pub use formula::{expand_derived, resugar, ActionRef, AgentId, AtomId, Formula};
pub use kripke::{check_frames, FrameCondition, FrameReport, KripkeModel, WorldId};
pub use relation::{compose, Relation};
pub use semantics::{satisfies, update, PointedModel, UpdateOptions};
pub use dsl::{parse_formula, parse_scenario, print_scenario, DslError};
pub use proof::{check_proof, CheckedTheorem, Proof, ProofContext, ProofError, RuleTag};
pub use scenario::Scenario;

/// Scalar type used for continuous instrument values.
pub type Scalar = f64;
