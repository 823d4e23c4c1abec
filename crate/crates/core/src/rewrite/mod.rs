//! The equational theory as a rewrite system, and a bounded search for
//! derivations between two terms.
//!
//! Rules are matched directly on the syntax tree. Every application is
//! type checked on the spot, and every derivation found by the search is
//! replayed and checked against the density-matrix semantics.

mod axiom20;
pub mod derived;
pub mod rules;
pub mod search;

use thiserror::Error;

use crate::semantics::SemanticsError;
use crate::typecheck::TypeError;

pub use derived::{derived_rule_suite, DerivedRule};
pub use rules::{apply_rule, canonical_discard, rule_catalog, Direction, RewriteRule, Rule};
pub use search::{prove_equiv, prove_equiv_with, Derivation, SearchLimits, Step};

#[derive(Debug, Error)]
pub enum RewriteError {
    /// A rule produced a term of a different type or context. This is a bug
    /// in the rule, never a property of the input.
    #[error("{rule} at {position:?} does not preserve typing: {detail}")]
    TypeNotPreserved { rule: Rule, position: Vec<usize>, detail: String },
    #[error("step {step} ({rule}) does not replay")]
    Replay { step: usize, rule: Rule },
    #[error("step {step} ({rule}) leads to {term}, which is not semantically equal to the start")]
    Referee { step: usize, rule: Rule, term: String },
    #[error("unknown rule {0}")]
    UnknownRule(String),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}
