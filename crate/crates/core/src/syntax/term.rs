use std::collections::BTreeSet;
use std::fmt;

use super::name::{Atom, Name, Var};
use super::perm::Perm;
use crate::error::SyntaxError;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FuncSymbol {
    pub name: Name,
    pub arity: usize,
    pub commutative: bool,
}

impl FuncSymbol {
    pub fn new(name: &str, arity: usize) -> FuncSymbol {
        FuncSymbol { name: Name::new(name), arity, commutative: false }
    }

    pub fn commutative(name: &str) -> FuncSymbol {
        FuncSymbol { name: Name::new(name), arity: 2, commutative: true }
    }
}

/// Reserved binary symbol used to pack the two sides of a unification
/// problem into one term.
pub fn pair_symbol() -> FuncSymbol {
    FuncSymbol::new(PAIR, 2)
}

pub const PAIR: &str = "pair";

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Atom(Atom),
    Susp(Perm, Var),
    Abs(Atom, Box<Term>),
    App(FuncSymbol, Vec<Term>),
}

impl Term {
    pub fn atom(a: Atom) -> Term {
        Term::Atom(a)
    }

    pub fn var(x: Var) -> Term {
        Term::Susp(Perm::id(), x)
    }

    pub fn susp(p: Perm, x: Var) -> Term {
        Term::Susp(p, x)
    }

    pub fn abs(a: Atom, body: Term) -> Term {
        Term::Abs(a, Box::new(body))
    }

    pub fn app(f: FuncSymbol, args: Vec<Term>) -> Term {
        debug_assert_eq!(f.arity, args.len(), "arity mismatch for {}", f.name);
        Term::App(f, args)
    }

    pub fn pair(s: Term, t: Term) -> Term {
        Term::App(pair_symbol(), vec![s, t])
    }

    /// Splits a `pair(s,t)` term.
    pub fn as_pair(&self) -> Option<(&Term, &Term)> {
        match self {
            Term::App(f, args) if f.name.as_str() == PAIR && args.len() == 2 => Some((&args[0], &args[1])),
            _ => None,
        }
    }

    pub fn is_susp(&self) -> bool {
        matches!(self, Term::Susp(..))
    }

    /// The permutation action, pushing `pi` down to suspensions.
    pub fn permute(&self, pi: &Perm) -> Term {
        if pi.is_id() {
            return self.clone();
        }
        self.permute_nonid(pi)
    }

    fn permute_nonid(&self, pi: &Perm) -> Term {
        match self {
            Term::Atom(a) => Term::Atom(pi.apply(*a)),
            Term::Susp(p, x) => Term::Susp(pi.compose(p), *x),
            Term::Abs(a, t) => Term::Abs(pi.apply(*a), Box::new(t.permute_nonid(pi))),
            Term::App(f, args) => Term::App(*f, args.iter().map(|t| t.permute_nonid(pi)).collect()),
        }
    }

    pub fn swap(&self, a: Atom, b: Atom) -> Term {
        self.permute(&Perm::swap(a, b))
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Atom(_) | Term::Susp(..) => 1,
            Term::Abs(_, t) => 1 + t.size(),
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn children(&self) -> &[Term] {
        match self {
            Term::Abs(_, t) => std::slice::from_ref(t.as_ref()),
            Term::App(_, args) => args,
            _ => &[],
        }
    }

    pub fn subterm_at(&self, pos: &Position) -> Result<&Term, SyntaxError> {
        let mut cur = self;
        for &i in &pos.0 {
            cur = cur
                .children()
                .get(i)
                .ok_or_else(|| SyntaxError::InvalidPosition(pos.clone(), self.to_string()))?;
        }
        Ok(cur)
    }

    pub fn replace_at(&self, pos: &Position, u: Term) -> Result<Term, SyntaxError> {
        fn go(t: &Term, path: &[usize], u: Term) -> Option<Term> {
            let Some((&i, rest)) = path.split_first() else {
                return Some(u);
            };
            match t {
                Term::Abs(a, body) if i == 0 => Some(Term::Abs(*a, Box::new(go(body, rest, u)?))),
                Term::App(f, args) if i < args.len() => {
                    let mut args = args.clone();
                    args[i] = go(&args[i], rest, u)?;
                    Some(Term::App(*f, args))
                }
                _ => None,
            }
        }
        go(self, &pos.0, u).ok_or_else(|| SyntaxError::InvalidPosition(pos.clone(), self.to_string()))
    }

    /// All positions in pre-order.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        self.walk_positions(&mut Vec::new(), &mut |p, _| out.push(Position(p.to_vec())), false);
        out
    }

    /// Positions whose subterm is not a suspension, in pre-order.
    pub fn nonvariable_positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        self.walk_positions(&mut Vec::new(), &mut |p, t| {
            if !t.is_susp() {
                out.push(Position(p.to_vec()))
            }
        }, false);
        out
    }

    /// Non-variable positions in post-order: every position comes after all
    /// positions strictly below it, siblings left to right.
    pub fn nonvariable_positions_postorder(&self) -> Vec<Position> {
        let mut out = Vec::new();
        self.walk_positions(&mut Vec::new(), &mut |p, t| {
            if !t.is_susp() {
                out.push(Position(p.to_vec()))
            }
        }, true);
        out
    }

    fn walk_positions(&self, path: &mut Vec<usize>, f: &mut impl FnMut(&[usize], &Term), post: bool) {
        if !post {
            f(path, self);
        }
        for (i, c) in self.children().iter().enumerate() {
            path.push(i);
            c.walk_positions(path, f, post);
            path.pop();
        }
        if post {
            f(path, self);
        }
    }

    /// Atoms occurring unabstracted, including those named by suspension
    /// permutations.
    pub fn free_atoms(&self) -> BTreeSet<Atom> {
        fn go(t: &Term, bound: &mut Vec<Atom>, out: &mut BTreeSet<Atom>) {
            match t {
                Term::Atom(a) => {
                    if !bound.contains(a) {
                        out.insert(*a);
                    }
                }
                Term::Susp(p, _) => out.extend(p.atoms().filter(|a| !bound.contains(a))),
                Term::Abs(a, body) => {
                    bound.push(*a);
                    go(body, bound, out);
                    bound.pop();
                }
                Term::App(_, args) => args.iter().for_each(|t| go(t, bound, out)),
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Every atom mentioned anywhere, bound or free.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        match self {
            Term::Atom(a) => {
                out.insert(*a);
            }
            Term::Susp(p, _) => out.extend(p.atoms()),
            Term::Abs(a, body) => {
                out.insert(*a);
                body.collect_atoms(out);
            }
            Term::App(_, args) => args.iter().for_each(|t| t.collect_atoms(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Atom(_) => {}
            Term::Susp(_, x) => {
                out.insert(*x);
            }
            Term::Abs(_, body) => body.collect_vars(out),
            Term::App(_, args) => args.iter().for_each(|t| t.collect_vars(out)),
        }
    }

    pub fn has_var(&self, x: Var) -> bool {
        match self {
            Term::Atom(_) => false,
            Term::Susp(_, y) => *y == x,
            Term::Abs(_, body) => body.has_var(x),
            Term::App(_, args) => args.iter().any(|t| t.has_var(x)),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Atom(_) => true,
            Term::Susp(..) => false,
            Term::Abs(_, body) => body.is_ground(),
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Largest disambiguator used by any atom or variable.
    pub fn max_dis(&self) -> u32 {
        match self {
            Term::Atom(a) => a.dis,
            Term::Susp(p, x) => p.atoms().map(|a| a.dis).max().unwrap_or(0).max(x.dis),
            Term::Abs(a, body) => a.dis.max(body.max_dis()),
            Term::App(_, args) => args.iter().map(Term::max_dis).max().unwrap_or(0),
        }
    }

    /// Structural renaming of atoms and variables (not a permutation action:
    /// atoms inside suspension permutations are renamed in place).
    pub fn rename(&self, fa: &impl Fn(Atom) -> Atom, fv: &impl Fn(Var) -> Var) -> Term {
        match self {
            Term::Atom(a) => Term::Atom(fa(*a)),
            Term::Susp(p, x) => Term::Susp(p.rename(fa), fv(*x)),
            Term::Abs(a, body) => Term::Abs(fa(*a), Box::new(body.rename(fa, fv))),
            Term::App(f, args) => Term::App(*f, args.iter().map(|t| t.rename(fa, fv)).collect()),
        }
    }

    pub fn symbols(&self, out: &mut BTreeSet<FuncSymbol>) {
        match self {
            Term::Abs(_, body) => body.symbols(out),
            Term::App(f, args) => {
                out.insert(*f);
                args.iter().for_each(|t| t.symbols(out));
            }
            _ => {}
        }
    }
}

/// A path from the root: argument index for applications, 0 for an
/// abstraction body.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn concat(&self, other: &Position) -> Position {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Position(v)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Vec<usize>> for Position {
    fn from(v: Vec<usize>) -> Position {
        Position(v)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Atom(a) => write!(f, "{a}"),
            Term::Susp(p, x) => {
                if p.is_id() {
                    write!(f, "{x}")
                } else {
                    write!(f, "{p}.{x}")
                }
            }
            Term::Abs(a, body) => write!(f, "[{a}]{body}"),
            Term::App(s, args) => {
                write!(f, "{}", s.name)?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, t) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{t}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(s: &str) -> Term {
        Term::atom(Atom::new(s))
    }

    fn sample() -> Term {
        // f([a]X, b)
        let f = FuncSymbol::new("f", 2);
        Term::app(f, vec![Term::abs(Atom::new("a"), Term::var(Var::new("X"))), at("b")])
    }

    #[test]
    fn permutation_action() {
        let f = FuncSymbol::new("f", 2);
        let t = Term::app(f, vec![at("a"), Term::abs(Atom::new("b"), at("c"))]);
        let s = t.swap(Atom::new("a"), Atom::new("b"));
        assert_eq!(s.to_string(), "f(b,[a]c)");
        let x = Term::susp(Perm::swap(Atom::new("c"), Atom::new("b")), Var::new("X"));
        let ab = Perm::swap(Atom::new("a"), Atom::new("b"));
        let expect = ab.compose(&Perm::swap(Atom::new("c"), Atom::new("b")));
        assert_eq!(x.permute(&ab), Term::susp(expect, Var::new("X")));
    }

    #[test]
    fn positions_of_sample() {
        let t = sample();
        let ps: Vec<String> = t.positions().iter().map(|p| p.to_string()).collect();
        assert_eq!(ps, ["[]", "[0]", "[0,0]", "[1]"]);
        let nv: Vec<String> = t.nonvariable_positions().iter().map(|p| p.to_string()).collect();
        assert_eq!(nv, ["[]", "[0]", "[1]"]);
        let post: Vec<String> = t.nonvariable_positions_postorder().iter().map(|p| p.to_string()).collect();
        assert_eq!(post, ["[0]", "[1]", "[]"]);
        assert!(Term::var(Var::new("X")).nonvariable_positions().is_empty());
    }

    #[test]
    fn subterm_and_replace() {
        let t = sample();
        assert_eq!(t.subterm_at(&Position(vec![0, 0])).unwrap(), &Term::var(Var::new("X")));
        assert_eq!(t.replace_at(&Position(vec![1]), at("c")).unwrap().to_string(), "f([a]X,c)");
        assert!(at("a").subterm_at(&Position(vec![0])).is_err());
    }

    #[test]
    fn free_atoms_include_permutation_atoms() {
        let f = FuncSymbol::new("f", 2);
        let t = Term::abs(Atom::new("a"), Term::app(f, vec![at("a"), at("b")]));
        assert_eq!(t.free_atoms().into_iter().collect::<Vec<_>>(), vec![Atom::new("b")]);
        let s = Term::susp(Perm::swap(Atom::new("a"), Atom::new("b")), Var::new("X"));
        assert_eq!(s.free_atoms().len(), 2);
    }
}
