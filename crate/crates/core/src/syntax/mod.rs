//! Nominal terms and the permutation and substitution actions on them.

mod context;
mod name;
mod perm;
mod subst;
mod supply;
mod term;

pub use context::{FreshCtx, TermInCtx};
pub use name::{Atom, Name, Var};
pub use perm::Perm;
pub use subst::Subst;
pub use supply::{freshen_term_in_ctx, NameSupply, Renaming};
pub use term::{pair_symbol, FuncSymbol, Position, Term, PAIR};
