//! Concrete syntax: terms, contexts, judgements and theory files.

pub mod bundled;
mod parse;
mod theory;

pub use parse::{parse_context, parse_judgement, parse_judgement_with, parse_term, parse_term_with, SymbolTable};
pub use theory::{load_theory, load_theory_str, parse_theory, Loaded, TheoryFile, DEFAULT_E_DEPTH};
