use std::collections::BTreeSet;
use std::fmt;

use super::name::{Atom, Var};
use super::term::Term;

/// A set of primitive freshness constraints `a#X`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreshCtx {
    set: BTreeSet<(Atom, Var)>,
}

impl FreshCtx {
    pub fn new() -> FreshCtx {
        FreshCtx::default()
    }

    pub fn insert(&mut self, a: Atom, x: Var) -> bool {
        self.set.insert((a, x))
    }

    pub fn contains(&self, a: Atom, x: Var) -> bool {
        self.set.contains(&(a, x))
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Atom, Var)> + '_ {
        self.set.iter().copied()
    }

    pub fn extend(&mut self, other: &FreshCtx) {
        self.set.extend(other.set.iter().copied());
    }

    pub fn union(&self, other: &FreshCtx) -> FreshCtx {
        let mut out = self.clone();
        out.extend(other);
        out
    }

    pub fn is_subset(&self, other: &FreshCtx) -> bool {
        self.set.is_subset(&other.set)
    }

    pub fn difference(&self, other: &FreshCtx) -> FreshCtx {
        FreshCtx { set: self.set.difference(&other.set).copied().collect() }
    }

    pub fn retain(&mut self, f: impl FnMut(&(Atom, Var)) -> bool) {
        self.set.retain(f);
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.set.iter().map(|c| c.0).collect()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.set.iter().map(|c| c.1).collect()
    }

    pub fn max_dis(&self) -> u32 {
        self.set.iter().map(|(a, x)| a.dis.max(x.dis)).max().unwrap_or(0)
    }

    /// `{a#X | a ∈ atoms, X ∈ vars}`.
    pub fn product<'a>(atoms: impl IntoIterator<Item = &'a Atom>, vars: &BTreeSet<Var>) -> FreshCtx {
        let mut out = FreshCtx::new();
        for a in atoms {
            for x in vars {
                out.insert(*a, *x);
            }
        }
        out
    }
}

impl FromIterator<(Atom, Var)> for FreshCtx {
    fn from_iter<I: IntoIterator<Item = (Atom, Var)>>(iter: I) -> FreshCtx {
        FreshCtx { set: iter.into_iter().collect() }
    }
}

impl fmt::Display for FreshCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, x)) in self.set.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}#{x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FreshCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

/// A judgement-style pair `Δ ⊢ t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TermInCtx {
    pub context: FreshCtx,
    pub term: Term,
}

impl TermInCtx {
    pub fn new(context: FreshCtx, term: Term) -> TermInCtx {
        TermInCtx { context, term }
    }

    pub fn bare(term: Term) -> TermInCtx {
        TermInCtx { context: FreshCtx::new(), term }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut v = self.term.vars();
        v.extend(self.context.vars());
        v
    }

    pub fn max_dis(&self) -> u32 {
        self.term.max_dis().max(self.context.max_dis())
    }
}

impl fmt::Display for TermInCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.context.is_empty() {
            write!(f, "|- {}", self.term)
        } else {
            write!(f, "{} |- {}", self.context, self.term)
        }
    }
}
