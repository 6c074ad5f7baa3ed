//! Nominal rewriting and narrowing modulo equational theories.
//!
//! Terms carry atoms, suspended permutations on unknowns and abstractions.
//! On top of the freshness and α-equivalence judgements the crate provides
//! matching and unification (syntactic, modulo commutativity, and a bounded
//! search for user axioms), rewriting and closed rewriting, narrowing with
//! basic-position tracking, and a narrowing-based T-unification procedure.

pub mod alpha;
pub mod equational;
pub mod error;
pub mod frontend;
pub mod narrowing;
pub mod rewriting;
pub mod syntax;
pub mod unify;

pub use error::{ParseError, SyntaxError, TheoryError};
