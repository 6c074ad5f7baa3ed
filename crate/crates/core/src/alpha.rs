//! Freshness and α-equivalence judgements under a freshness context.

use std::collections::BTreeSet;

use crate::syntax::{Atom, FreshCtx, Perm, Subst, Term, Var};

/// A constraint awaiting a derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obligation {
    Fresh(Atom, Term),
    Alpha(Term, Term),
    Primitive(Atom, Var),
}

/// Primitive constraints equivalent to `a#t`, or `None` if `a#t` reduces to
/// the underivable `a#a`.
pub fn fresh_obligations(a: Atom, t: &Term) -> Option<FreshCtx> {
    let mut out = FreshCtx::new();
    collect_fresh(a, t, &mut out).then_some(out)
}

pub(crate) fn collect_fresh(a: Atom, t: &Term, out: &mut FreshCtx) -> bool {
    match t {
        Term::Atom(b) => a != *b,
        Term::Susp(p, x) => {
            out.insert(p.inverse().apply(a), *x);
            true
        }
        Term::Abs(b, body) => a == *b || collect_fresh(a, body, out),
        Term::App(_, args) => args.iter().all(|u| collect_fresh(a, u, out)),
    }
}

pub fn check_fresh(delta: &FreshCtx, a: Atom, t: &Term) -> bool {
    match t {
        Term::Atom(b) => a != *b,
        Term::Susp(p, x) => delta.contains(p.inverse().apply(a), *x),
        Term::Abs(b, body) => a == *b || check_fresh(delta, a, body),
        Term::App(_, args) => args.iter().all(|u| check_fresh(delta, a, u)),
    }
}

pub fn check_alpha(delta: &FreshCtx, s: &Term, t: &Term) -> bool {
    match (s, t) {
        (Term::Atom(a), Term::Atom(b)) => a == b,
        (Term::Susp(p, x), Term::Susp(q, y)) => {
            x == y && p.disagreement(q).into_iter().all(|a| delta.contains(a, *x))
        }
        (Term::Abs(a, s1), Term::Abs(b, t1)) => {
            if a == b {
                check_alpha(delta, s1, t1)
            } else {
                check_fresh(delta, *a, t1) && check_alpha(delta, s1, &t1.swap(*a, *b))
            }
        }
        (Term::App(f, ss), Term::App(g, ts)) => {
            f.name == g.name && ss.len() == ts.len() && ss.iter().zip(ts).all(|(u, v)| check_alpha(delta, u, v))
        }
        _ => false,
    }
}

/// Least set of primitive constraints under which `s ≈α t` holds, if any.
pub fn alpha_obligations(s: &Term, t: &Term) -> Option<FreshCtx> {
    fn go(s: &Term, t: &Term, out: &mut FreshCtx) -> bool {
        match (s, t) {
            (Term::Atom(a), Term::Atom(b)) => a == b,
            (Term::Susp(p, x), Term::Susp(q, y)) => {
                if x != y {
                    return false;
                }
                for a in p.disagreement(q) {
                    out.insert(a, *x);
                }
                true
            }
            (Term::Abs(a, s1), Term::Abs(b, t1)) => {
                if a == b {
                    go(s1, t1, out)
                } else {
                    collect_fresh(*a, t1, out) && go(s1, &t1.swap(*a, *b), out)
                }
            }
            (Term::App(f, ss), Term::App(g, ts)) => {
                f.name == g.name && ss.len() == ts.len() && ss.iter().zip(ts).all(|(u, v)| go(u, v, out))
            }
            _ => false,
        }
    }
    let mut out = FreshCtx::new();
    go(s, t, &mut out).then_some(out)
}

/// `⟨Δθ⟩_nf`: the least context entailing `Δθ`.
pub fn context_nf(delta: &FreshCtx, theta: &Subst) -> Option<FreshCtx> {
    let mut out = FreshCtx::new();
    for (a, x) in delta.iter() {
        if !collect_fresh(a, &theta.image_of(x), &mut out) {
            return None;
        }
    }
    Some(out)
}

pub fn entails(delta: &FreshCtx, obligations: &[Obligation]) -> bool {
    obligations.iter().all(|o| match o {
        Obligation::Fresh(a, t) => check_fresh(delta, *a, t),
        Obligation::Alpha(s, t) => check_alpha(delta, s, t),
        Obligation::Primitive(a, x) => delta.contains(*a, *x),
    })
}

/// Replaces `π·X` by `X` wherever `ds(π,id)#X` is already in `delta`.
pub fn simplify_suspensions(delta: &FreshCtx, t: &Term) -> Term {
    match t {
        Term::Atom(_) => t.clone(),
        Term::Susp(p, x) => {
            if !p.is_id() && p.domain().into_iter().all(|a| delta.contains(a, *x)) {
                Term::Susp(Perm::id(), *x)
            } else {
                t.clone()
            }
        }
        Term::Abs(a, body) => Term::Abs(*a, Box::new(simplify_suspensions(delta, body))),
        Term::App(f, args) => Term::App(*f, args.iter().map(|u| simplify_suspensions(delta, u)).collect()),
    }
}

/// Re-expresses a context after a step that introduced the globally fresh
/// atoms `fresh`: constraints on those atoms are dropped, then restated for
/// the ones still mentioned by `terms`, against every variable of `terms`.
///
/// Sound because a freshly generated atom is fresh for every unknown in scope.
pub fn settle_fresh_atoms(ctx: &FreshCtx, fresh: &BTreeSet<Atom>, terms: &[&Term]) -> FreshCtx {
    let mut out: FreshCtx = ctx.iter().filter(|(a, _)| !fresh.contains(a)).collect();
    let mut mentioned = BTreeSet::new();
    let mut vars = BTreeSet::new();
    for t in terms {
        t.collect_atoms(&mut mentioned);
        t.collect_vars(&mut vars);
    }
    for a in mentioned.intersection(fresh) {
        for x in &vars {
            out.insert(*a, *x);
        }
    }
    out
}

/// Drops constraints on the atoms in `fresh` unless both the atom and the
/// variable still occur in `terms`. Nothing is restated: after a narrowing
/// step the variables introduced by the substitution may legitimately
/// mention the step's generated atoms.
pub fn prune_fresh_atoms(ctx: &FreshCtx, fresh: &BTreeSet<Atom>, terms: &[&Term]) -> FreshCtx {
    let mut mentioned = BTreeSet::new();
    let mut vars = BTreeSet::new();
    for t in terms {
        t.collect_atoms(&mut mentioned);
        t.collect_vars(&mut vars);
    }
    ctx.iter().filter(|(a, x)| !fresh.contains(a) || (mentioned.contains(a) && vars.contains(x))).collect()
}
