use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::name::Var;
use super::term::Term;

/// Finite map from variables to terms. Identity bindings `X ↦ X` are never
/// stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subst {
    map: BTreeMap<Var, Term>,
}

impl Subst {
    pub fn id() -> Subst {
        Subst::default()
    }

    pub fn single(x: Var, t: Term) -> Subst {
        let mut s = Subst::id();
        s.insert(x, t);
        s
    }

    pub fn insert(&mut self, x: Var, t: Term) {
        if t == Term::var(x) {
            self.map.remove(&x);
        } else {
            self.map.insert(x, t);
        }
    }

    pub fn get(&self, x: Var) -> Option<&Term> {
        self.map.get(&x)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.map.iter()
    }

    pub fn domain(&self) -> BTreeSet<Var> {
        self.map.keys().copied().collect()
    }

    pub fn image_of(&self, x: Var) -> Term {
        self.map.get(&x).cloned().unwrap_or_else(|| Term::var(x))
    }

    /// `tθ`; capture is permitted under abstractions.
    pub fn apply(&self, t: &Term) -> Term {
        if self.map.is_empty() {
            return t.clone();
        }
        self.apply_inner(t)
    }

    fn apply_inner(&self, t: &Term) -> Term {
        match t {
            Term::Atom(_) => t.clone(),
            Term::Susp(p, x) => match self.map.get(x) {
                Some(u) => u.permute(p),
                None => t.clone(),
            },
            Term::Abs(a, body) => Term::Abs(*a, Box::new(self.apply_inner(body))),
            Term::App(f, args) => Term::App(*f, args.iter().map(|u| self.apply_inner(u)).collect()),
        }
    }

    /// The substitution `t ↦ (tθ1)θ2`.
    pub fn compose(&self, then: &Subst) -> Subst {
        let mut out = Subst::id();
        for (x, t) in &self.map {
            out.insert(*x, then.apply(t));
        }
        for (x, t) in &then.map {
            if !self.map.contains_key(x) {
                out.insert(*x, t.clone());
            }
        }
        out
    }

    pub fn restrict(&self, vars: &BTreeSet<Var>) -> Subst {
        Subst { map: self.map.iter().filter(|(x, _)| vars.contains(x)).map(|(x, t)| (*x, t.clone())).collect() }
    }

    pub fn map_images(&self, f: impl Fn(&Term) -> Term) -> Subst {
        let mut out = Subst::id();
        for (x, t) in &self.map {
            out.insert(*x, f(t));
        }
        out
    }

    /// Variables occurring in the images.
    pub fn range_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for t in self.map.values() {
            t.collect_vars(&mut out);
        }
        out
    }

    pub fn is_idempotent(&self) -> bool {
        let dom = self.domain();
        self.range_vars().is_disjoint(&dom)
    }
}

impl FromIterator<(Var, Term)> for Subst {
    fn from_iter<I: IntoIterator<Item = (Var, Term)>>(iter: I) -> Subst {
        let mut s = Subst::id();
        for (x, t) in iter {
            s.insert(x, t);
        }
        s
    }
}

impl fmt::Display for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (x, t)) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x} -> {t}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{Atom, FuncSymbol, Perm};

    fn x(s: &str) -> Var {
        Var::new(s)
    }

    #[test]
    fn suspension_applies_permutation_eagerly() {
        let t = Term::susp(Perm::swap(Atom::new("a"), Atom::new("b")), x("X"));
        let th = Subst::single(x("X"), Term::atom(Atom::new("a")));
        assert_eq!(th.apply(&t), Term::atom(Atom::new("b")));
    }

    #[test]
    fn capture_is_permitted() {
        let f = FuncSymbol::new("f", 2);
        let a = Atom::new("a");
        let t = Term::abs(a, Term::var(x("X")));
        let th = Subst::single(x("X"), Term::app(f, vec![Term::atom(a), Term::atom(a)]));
        assert_eq!(th.apply(&t).to_string(), "[a]f(a,a)");
    }

    #[test]
    fn compose_and_restrict() {
        let a = Term::atom(Atom::new("a"));
        let c = Subst::single(x("X"), Term::var(x("Y"))).compose(&Subst::single(x("Y"), a.clone()));
        assert_eq!(c, [(x("X"), a.clone()), (x("Y"), a.clone())].into_iter().collect());
        let r = c.restrict(&[x("X")].into_iter().collect());
        assert_eq!(r, Subst::single(x("X"), a));
        assert!(Subst::single(x("X"), Term::var(x("X"))).is_empty());
    }
}
