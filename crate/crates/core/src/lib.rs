//! A linear quantum expression calculus with a density-matrix semantics.
//!
//! The crate provides a linear type checker, a denotational semantics into
//! superoperators, an executable equational theory with derivation search,
//! a decision procedure for equivalence of open quantum types, and a
//! translation to and from a continuation-style algebraic calculus.

pub mod algebraic;
pub mod cli;
pub mod gen;
pub mod linalg;
pub mod opentype;
pub mod rewrite;
pub mod semantics;
pub mod sexp;
pub mod suites;
pub mod syntax;
pub mod typecheck;
