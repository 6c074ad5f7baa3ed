//! Transformation-based solver shared by matching and unification, with and
//! without commutative symbols.
//!
//! A state holds pending equations, pending freshness constraints, residual
//! fixed-point equations `π·X ≈? X` and the substitution built so far.
//! Commutative decomposition and fixed-point resolution split a state; split
//! states are explored cheapest-first, where the cost of a state is the total
//! depth of the fixed-point instantiations it committed to.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};

use super::Solution;
use crate::alpha::collect_fresh;
use crate::syntax::{Atom, FreshCtx, FuncSymbol, Name, Perm, Subst, Term, Var};

#[derive(Clone)]
pub(crate) struct State {
    eqs: Vec<(Term, Term)>,
    fresh: Vec<(Atom, Term)>,
    fix: Vec<(Perm, Var)>,
    subst: Subst,
    cost: usize,
}

impl State {
    /// `eqs` are processed left to right.
    pub(crate) fn new(eqs: Vec<(Term, Term)>, ctx: &FreshCtx) -> State {
        let mut eqs = eqs;
        eqs.reverse();
        State {
            eqs,
            fresh: ctx.iter().map(|(a, x)| (a, Term::var(x))).collect(),
            fix: Vec::new(),
            subst: Subst::id(),
            cost: 0,
        }
    }

    fn bind(&mut self, x: Var, u: Term) {
        let s1 = Subst::single(x, u.clone());
        for (l, r) in self.eqs.iter_mut() {
            if l.has_var(x) {
                *l = s1.apply(l);
            }
            if r.has_var(x) {
                *r = s1.apply(r);
            }
        }
        for (_, t) in self.fresh.iter_mut() {
            if t.has_var(x) {
                *t = s1.apply(t);
            }
        }
        self.subst = self.subst.compose(&s1);
        let fix = std::mem::take(&mut self.fix);
        for (p, y) in fix {
            if y == x {
                self.eqs.push((u.permute(&p), u.clone()));
            } else {
                self.fix.push((p, y));
            }
        }
    }

    /// Reduces pending freshness constraints to primitive form.
    fn reduce_fresh(&mut self) -> Option<FreshCtx> {
        let mut ctx = FreshCtx::new();
        for (a, t) in &self.fresh {
            if !collect_fresh(*a, t, &mut ctx) {
                return None;
            }
        }
        self.fresh = ctx.iter().map(|(a, x)| (a, Term::var(x))).collect();
        Some(ctx)
    }
}

enum Outcome {
    Fail,
    Done(Solution),
    Split(Vec<State>),
}

struct Queued {
    cost: usize,
    seq: usize,
    state: State,
}

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        (self.cost, self.seq) == (other.cost, other.seq)
    }
}

impl Eq for Queued {}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Queued {
    // Reversed: BinaryHeap is a max-heap and we want the cheapest, oldest state.
    fn cmp(&self, other: &Self) -> Ordering {
        (other.cost, other.seq).cmp(&(self.cost, self.seq))
    }
}

/// Lazy enumeration of solved forms.
pub(crate) struct Search {
    comm: Vec<FuncSymbol>,
    comm_names: BTreeSet<Name>,
    /// `None`: every variable may be instantiated (unification).
    flexible: Option<BTreeSet<Var>>,
    budget: usize,
    heap: BinaryHeap<Queued>,
    seq: usize,
    pub(crate) truncated: bool,
}

impl Search {
    pub(crate) fn new(
        start: State,
        comm: &BTreeSet<FuncSymbol>,
        flexible: Option<BTreeSet<Var>>,
        budget: usize,
    ) -> Search {
        let mut s = Search {
            comm: comm.iter().copied().collect(),
            comm_names: comm.iter().map(|f| f.name).collect(),
            flexible,
            budget,
            heap: BinaryHeap::new(),
            seq: 0,
            truncated: false,
        };
        s.push(start);
        s
    }

    fn push(&mut self, state: State) {
        self.seq += 1;
        self.heap.push(Queued { cost: state.cost, seq: self.seq, state });
    }

    fn is_flex(&self, x: Var) -> bool {
        self.flexible.as_ref().is_none_or(|f| f.contains(&x))
    }

    fn run(&mut self, mut st: State) -> Outcome {
        while let Some((s, t)) = st.eqs.pop() {
            match (s, t) {
                (Term::Susp(p, x), Term::Susp(q, y)) if x == y => {
                    let ds = p.disagreement(&q);
                    if ds.is_empty() {
                        continue;
                    }
                    if self.is_flex(x) && !self.comm.is_empty() {
                        st.fix.push((q.inverse().compose(&p), x));
                    } else {
                        st.fresh.extend(ds.into_iter().map(|a| (a, Term::var(x))));
                    }
                }
                (Term::Susp(p, x), t) if self.is_flex(x) => {
                    if t.has_var(x) {
                        return Outcome::Fail;
                    }
                    st.bind(x, t.permute(&p.inverse()));
                }
                (s, Term::Susp(q, y)) if self.is_flex(y) => {
                    if s.has_var(y) {
                        return Outcome::Fail;
                    }
                    st.bind(y, s.permute(&q.inverse()));
                }
                (Term::Atom(a), Term::Atom(b)) => {
                    if a != b {
                        return Outcome::Fail;
                    }
                }
                (Term::Abs(a, s1), Term::Abs(b, t1)) => {
                    if a == b {
                        st.eqs.push((*s1, *t1));
                    } else {
                        let swapped = t1.swap(a, b);
                        st.fresh.push((a, *t1));
                        st.eqs.push((*s1, swapped));
                    }
                }
                (Term::App(f, ss), Term::App(g, ts)) if f.name == g.name && ss.len() == ts.len() => {
                    if ss.len() == 2 && self.comm_names.contains(&f.name) {
                        let mut other = st.clone();
                        st.eqs.push((ss[1].clone(), ts[1].clone()));
                        st.eqs.push((ss[0].clone(), ts[0].clone()));
                        other.eqs.push((ss[1].clone(), ts[0].clone()));
                        other.eqs.push((ss[0].clone(), ts[1].clone()));
                        return Outcome::Split(vec![st, other]);
                    }
                    for pair in ss.into_iter().zip(ts).rev() {
                        st.eqs.push(pair);
                    }
                }
                _ => return Outcome::Fail,
            }
        }
        if st.reduce_fresh().is_none() {
            return Outcome::Fail;
        }
        if !st.fix.is_empty() {
            let (p, x) = st.fix.remove(0);
            return Outcome::Split(self.resolve_fixpoint(st, p, x));
        }
        let context = st.reduce_fresh().expect("already reduced");
        Outcome::Done(Solution { context, subst: st.subst })
    }

    /// Branches for `p·X ≈? X`: the freshness solution first, then
    /// instantiations ordered by depth.
    fn resolve_fixpoint(&mut self, st: State, p: Perm, x: Var) -> Vec<State> {
        let mut out = Vec::new();
        let mut fresh = st.clone();
        fresh.fresh.extend(p.domain().into_iter().map(|a| (a, Term::var(x))));
        out.push(fresh);
        self.truncated = true;
        for (depth, t) in fixpoint_candidates(&p, &self.comm, self.budget) {
            let mut b = st.clone();
            b.cost += depth;
            b.bind(x, t);
            out.push(b);
        }
        out
    }
}

impl Iterator for Search {
    type Item = Solution;

    fn next(&mut self) -> Option<Solution> {
        while let Some(Queued { state, .. }) = self.heap.pop() {
            match self.run(state) {
                Outcome::Fail => {}
                Outcome::Done(sol) => return Some(sol),
                Outcome::Split(states) => states.into_iter().for_each(|s| self.push(s)),
            }
        }
        None
    }
}

/// Ground terms built from the atoms of `dom(p)` with commutative symbols,
/// of nesting depth 1..=budget, that are fixed by `p` modulo C.
pub(crate) fn fixpoint_candidates(p: &Perm, comm: &[FuncSymbol], budget: usize) -> Vec<(usize, Term)> {
    let mut pool: Vec<(usize, Term)> = p.domain().into_iter().map(|a| (0, Term::Atom(a))).collect();
    let mut seen: BTreeSet<Term> = pool.iter().map(|(_, t)| t.clone()).collect();
    let names: BTreeSet<Name> = comm.iter().map(|f| f.name).collect();
    let mut out = Vec::new();
    for depth in 1..=budget {
        let mut fresh = Vec::new();
        for f in comm {
            for i in 0..pool.len() {
                for j in i..pool.len() {
                    if pool[i].0.max(pool[j].0) + 1 != depth {
                        continue;
                    }
                    let t = Term::app(*f, vec![pool[i].1.clone(), pool[j].1.clone()]);
                    if seen.insert(c_canonical(&names, &t)) {
                        fresh.push((depth, t));
                    }
                }
            }
        }
        for (d, t) in &fresh {
            if c_canonical(&names, &t.permute(p)) == c_canonical(&names, t) {
                out.push((*d, t.clone()));
            }
        }
        pool.extend(fresh);
    }
    out
}

/// Canonical representative of a binder-free term modulo commutativity.
fn c_canonical(comm: &BTreeSet<Name>, t: &Term) -> Term {
    match t {
        Term::App(f, args) => {
            let mut args: Vec<Term> = args.iter().map(|u| c_canonical(comm, u)).collect();
            if comm.contains(&f.name) {
                args.sort();
            }
            Term::App(*f, args)
        }
        _ => t.clone(),
    }
}
