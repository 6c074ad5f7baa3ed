//! Equality, matching and unification modulo an equational theory.
//!
//! The empty theory and commutativity are handled by complete procedures.
//! A general axiom set is handled by bounded search over axiom applications,
//! which is sound but may miss answers.

mod solver;
mod variants;

use std::collections::BTreeSet;

use crate::alpha::{check_alpha, check_fresh, context_nf, settle_fresh_atoms, simplify_suspensions};
use crate::syntax::{Atom, FreshCtx, FuncSymbol, Name, NameSupply, Subst, Term, TermInCtx, Var};
use solver::{Search, State};
pub use variants::{variants, Variant};

/// A nominal identity `∇ ⊢ l ≈ r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Axiom {
    pub name: String,
    pub context: FreshCtx,
    pub left: Term,
    pub right: Term,
}

impl Axiom {
    pub fn is_regular(&self) -> bool {
        self.left.vars() == self.right.vars()
    }

    pub fn max_dis(&self) -> u32 {
        self.left.max_dis().max(self.right.max_dis()).max(self.context.max_dis())
    }

    /// `f(X,Y) ≈ f(Y,X)`.
    pub fn commutativity(f: FuncSymbol) -> Axiom {
        let (x, y) = (Term::var(Var::new("X")), Term::var(Var::new("Y")));
        Axiom {
            name: format!("C_{}", f.name),
            context: FreshCtx::new(),
            left: Term::app(f, vec![x.clone(), y.clone()]),
            right: Term::app(f, vec![y, x]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TheoryE {
    Empty,
    Commutative(BTreeSet<FuncSymbol>),
    AxiomSet { axioms: Vec<Axiom>, depth_bound: usize },
}

impl TheoryE {
    pub fn commutative_symbols(&self) -> BTreeSet<FuncSymbol> {
        match self {
            TheoryE::Commutative(s) => s.clone(),
            _ => BTreeSet::new(),
        }
    }

    pub fn max_dis(&self) -> u32 {
        match self {
            TheoryE::AxiomSet { axioms, .. } => axioms.iter().map(Axiom::max_dis).max().unwrap_or(0),
            _ => 0,
        }
    }
}

/// A pair `(Δ', θ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Solution {
    pub context: FreshCtx,
    pub subst: Subst,
}

impl Solution {
    /// Drops `π` from `π·X` in the images wherever the context makes it
    /// irrelevant.
    fn simplified(self) -> Solution {
        let subst = self.subst.map_images(|t| simplify_suspensions(&self.context, t));
        Solution { context: self.context, subst }
    }
}

/// Equations between terms-in-context, solved simultaneously.
#[derive(Clone, Debug)]
pub struct UnifProblem {
    pub equations: Vec<(TermInCtx, TermInCtx)>,
}

impl UnifProblem {
    pub fn single(left: TermInCtx, right: TermInCtx) -> UnifProblem {
        UnifProblem { equations: vec![(left, right)] }
    }

    pub fn context(&self) -> FreshCtx {
        let mut ctx = FreshCtx::new();
        for (l, r) in &self.equations {
            ctx.extend(&l.context);
            ctx.extend(&r.context);
        }
        ctx
    }

    fn term_pairs(&self) -> Vec<(Term, Term)> {
        self.equations.iter().map(|(l, r)| (l.term.clone(), r.term.clone())).collect()
    }

    pub fn max_dis(&self) -> u32 {
        self.equations.iter().map(|(l, r)| l.max_dis().max(r.max_dis())).max().unwrap_or(0)
    }

    /// Whether `sol` satisfies the E-solution contract for every equation.
    pub fn is_solved_by(&self, theory: &TheoryE, sol: &Solution) -> bool {
        let Some(needed) = context_nf(&self.context(), &sol.subst) else {
            return false;
        };
        needed.is_subset(&sol.context)
            && self.equations.iter().all(|(l, r)| {
                e_equal(theory, &sol.context, &sol.subst.apply(&l.term), &sol.subst.apply(&r.term))
            })
    }
}

pub fn e_equal(theory: &TheoryE, delta: &FreshCtx, s: &Term, t: &Term) -> bool {
    match theory {
        TheoryE::Empty => check_alpha(delta, s, t),
        TheoryE::Commutative(syms) => {
            let names: BTreeSet<Name> = syms.iter().map(|f| f.name).collect();
            c_equal(&names, delta, s, t)
        }
        TheoryE::AxiomSet { axioms, depth_bound } => {
            if check_alpha(delta, s, t) {
                return true;
            }
            let mut supply = NameSupply::above(s.max_dis().max(t.max_dis()).max(delta.max_dis()).max(theory.max_dis()));
            let vs = variants(axioms, *depth_bound, delta, s, &mut supply);
            let vt = variants(axioms, *depth_bound, delta, t, &mut supply);
            vs.iter().any(|u| {
                vt.iter().any(|v| {
                    u.term.size() == v.term.size()
                        && check_alpha(&delta.union(&u.context).union(&v.context), &u.term, &v.term)
                })
            })
        }
    }
}

/// α-equivalence where the listed symbols may swap their two arguments.
pub fn c_equal(comm: &BTreeSet<Name>, delta: &FreshCtx, s: &Term, t: &Term) -> bool {
    match (s, t) {
        (Term::Atom(a), Term::Atom(b)) => a == b,
        (Term::Susp(p, x), Term::Susp(q, y)) => {
            x == y && p.disagreement(q).into_iter().all(|a| delta.contains(a, *x))
        }
        (Term::Abs(a, s1), Term::Abs(b, t1)) => {
            if a == b {
                c_equal(comm, delta, s1, t1)
            } else {
                check_fresh(delta, *a, t1) && c_equal(comm, delta, s1, &t1.swap(*a, *b))
            }
        }
        (Term::App(f, ss), Term::App(g, ts)) => {
            if f.name != g.name || ss.len() != ts.len() {
                return false;
            }
            let straight = ss.iter().zip(ts).all(|(u, v)| c_equal(comm, delta, u, v));
            straight
                || (ss.len() == 2
                    && comm.contains(&f.name)
                    && c_equal(comm, delta, &ss[0], &ts[1])
                    && c_equal(comm, delta, &ss[1], &ts[0]))
        }
        _ => false,
    }
}

/// Solutions of a matching problem: only variables of the pattern are
/// instantiated; the subject's context is carried into every solution.
fn match_search(comm: &BTreeSet<FuncSymbol>, pattern: &TermInCtx, subject: &TermInCtx) -> Search {
    let ctx = pattern.context.union(&subject.context);
    let start = State::new(vec![(pattern.term.clone(), subject.term.clone())], &ctx);
    Search::new(start, comm, Some(pattern.vars()), 0)
}

/// Syntactic nominal matching of `∇ ⊢ l` against `Δ ⊢ s`.
///
/// The returned context is `Δ` plus whatever the match additionally needs;
/// callers that require `Δ ⊢ ∇θ` compare it against `Δ`.
pub fn nominal_match(pattern: &TermInCtx, subject: &TermInCtx) -> Option<Solution> {
    match_search(&BTreeSet::new(), pattern, subject).next().map(Solution::simplified)
}

/// Matching modulo commutativity of `comm`; finitely many solutions.
pub fn c_match(comm: &BTreeSet<FuncSymbol>, pattern: &TermInCtx, subject: &TermInCtx) -> Vec<Solution> {
    let theory = TheoryE::Commutative(comm.clone());
    let check = UnifProblem::single(pattern.clone(), subject.clone());
    let mut out: Vec<Solution> = Vec::new();
    for sol in match_search(comm, pattern, subject).map(Solution::simplified) {
        if check.is_solved_by(&theory, &sol) && !out.contains(&sol) {
            out.push(sol);
        }
    }
    out
}

/// A matcher together with atoms invented while searching the subject's
/// equational class; constraints on those atoms may be discharged freely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matched {
    pub solution: Solution,
    pub fresh_atoms: BTreeSet<Atom>,
}

/// Matching modulo any theory. For axiom sets the subject is expanded to its
/// bounded class first.
pub fn e_match(theory: &TheoryE, pattern: &TermInCtx, subject: &TermInCtx, supply: &mut NameSupply) -> Vec<Matched> {
    match theory {
        TheoryE::Empty => nominal_match(pattern, subject)
            .map(|solution| Matched { solution, fresh_atoms: BTreeSet::new() })
            .into_iter()
            .collect(),
        TheoryE::Commutative(comm) => c_match(comm, pattern, subject)
            .into_iter()
            .map(|solution| Matched { solution, fresh_atoms: BTreeSet::new() })
            .collect(),
        TheoryE::AxiomSet { axioms, depth_bound } => {
            supply.bump_above(pattern.max_dis().max(subject.max_dis()).max(theory.max_dis()));
            let mut out: Vec<Matched> = Vec::new();
            for v in variants(axioms, *depth_bound, &subject.context, &subject.term, supply) {
                let ctx = subject.context.union(&v.context);
                let Some(sol) = nominal_match(pattern, &TermInCtx::new(ctx.clone(), v.term.clone())) else {
                    continue;
                };
                let images: Vec<Term> = sol.subst.iter().map(|(_, t)| t.clone()).collect();
                let refs: Vec<&Term> = images.iter().collect();
                let context = settle_fresh_atoms(&sol.context, &v.fresh, &refs);
                let m = Matched { solution: Solution { context, subst: sol.subst }, fresh_atoms: v.fresh };
                if !out.iter().any(|o| o.solution == m.solution) {
                    out.push(m);
                }
            }
            out
        }
    }
}

/// Most general syntactic unifier, with occurs check.
pub fn nominal_unify(problem: &UnifProblem) -> Option<Solution> {
    let start = State::new(problem.term_pairs(), &problem.context());
    Search::new(start, &BTreeSet::new(), None, 0).next().map(Solution::simplified)
}

/// Pull-based stream of unifiers.
pub struct Unifiers {
    inner: Inner,
    check: Option<(UnifProblem, TheoryE)>,
    emitted: Vec<Solution>,
    rejected: usize,
}

enum Inner {
    Search(Box<Search>),
    Listed(std::vec::IntoIter<Solution>),
}

impl Unifiers {
    /// True when fixed-point enumeration was cut at the budget, i.e. the
    /// stream may be incomplete.
    pub fn truncated(&self) -> bool {
        match &self.inner {
            Inner::Search(s) => s.truncated,
            Inner::Listed(_) => false,
        }
    }

    /// Candidates that failed re-verification (expected to stay 0).
    pub fn rejected(&self) -> usize {
        self.rejected
    }
}

impl Iterator for Unifiers {
    type Item = Solution;

    fn next(&mut self) -> Option<Solution> {
        loop {
            let sol = match &mut self.inner {
                Inner::Search(s) => s.next()?.simplified(),
                Inner::Listed(it) => it.next()?,
            };
            if self.emitted.contains(&sol) {
                continue;
            }
            if let Some((problem, theory)) = &self.check {
                if !problem.is_solved_by(theory, &sol) {
                    self.rejected += 1;
                    continue;
                }
            }
            self.emitted.push(sol.clone());
            return Some(sol);
        }
    }
}

/// Unification modulo commutativity of `comm`. Fixed-point equations
/// `π·X ≈? X` are answered by `ds(π,id)#X` and by ground instantiations of
/// depth up to `budget`.
pub fn c_unify(comm: &BTreeSet<FuncSymbol>, problem: &UnifProblem, budget: usize) -> Unifiers {
    let start = State::new(problem.term_pairs(), &problem.context());
    Unifiers {
        inner: Inner::Search(Box::new(Search::new(start, comm, None, budget))),
        check: Some((problem.clone(), TheoryE::Commutative(comm.clone()))),
        emitted: Vec::new(),
        rejected: 0,
    }
}

/// Unification modulo `theory`. Names invented for axiom-set search come
/// from `supply`.
pub fn e_unify(theory: &TheoryE, problem: &UnifProblem, budget: usize, supply: &mut NameSupply) -> Unifiers {
    match theory {
        TheoryE::Empty => Unifiers {
            inner: Inner::Listed(nominal_unify(problem).into_iter().collect::<Vec<_>>().into_iter()),
            check: Some((problem.clone(), TheoryE::Empty)),
            emitted: Vec::new(),
            rejected: 0,
        },
        TheoryE::Commutative(comm) => c_unify(comm, problem, budget),
        TheoryE::AxiomSet { axioms, depth_bound } => {
            supply.bump_above(problem.max_dis().max(theory.max_dis()));
            let ctx = problem.context();
            let pairs = problem.term_pairs();
            let (lhs, rhs) = pack(&pairs);
            let mut found = Vec::new();
            for v in variants(axioms, *depth_bound, &ctx, &lhs, supply) {
                let p = UnifProblem::single(
                    TermInCtx::new(ctx.union(&v.context), v.term.clone()),
                    TermInCtx::new(FreshCtx::new(), rhs.clone()),
                );
                let Some(sol) = nominal_unify(&p) else { continue };
                let images: Vec<Term> = sol.subst.iter().map(|(_, t)| t.clone()).collect();
                let refs: Vec<&Term> = images.iter().collect();
                let context = settle_fresh_atoms(&sol.context, &v.fresh, &refs);
                found.push(Solution { context, subst: sol.subst });
            }
            Unifiers {
                inner: Inner::Listed(found.into_iter()),
                check: Some((problem.clone(), theory.clone())),
                emitted: Vec::new(),
                rejected: 0,
            }
        }
    }
}

/// Packs several equations into one by nesting `pair`.
fn pack(pairs: &[(Term, Term)]) -> (Term, Term) {
    let mut it = pairs.iter().rev();
    let (l0, r0) = it.next().cloned().expect("at least one equation");
    it.fold((l0, r0), |(l, r), (a, b)| (Term::pair(a.clone(), l), Term::pair(b.clone(), r)))
}
