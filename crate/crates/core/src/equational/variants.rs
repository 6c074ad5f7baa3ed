//! Bounded exploration of the class of a term under a set of axioms.

use std::collections::BTreeSet;

use super::{nominal_match, Axiom};
use crate::alpha::{check_alpha, settle_fresh_atoms, simplify_suspensions};
use crate::syntax::{Atom, FreshCtx, NameSupply, Renaming, Term, TermInCtx};

/// A term reachable from the start by axiom applications, with the freshness
/// facts about atoms generated along the way.
#[derive(Clone, Debug)]
pub struct Variant {
    pub term: Term,
    pub context: FreshCtx,
    pub fresh: BTreeSet<Atom>,
    pub depth: usize,
}

pub(crate) fn freshen_axiom(ax: &Axiom, supply: &mut NameSupply) -> (Axiom, BTreeSet<Atom>) {
    let mut atoms = ax.left.atoms();
    atoms.extend(ax.right.atoms());
    atoms.extend(ax.context.atoms());
    let mut vars = ax.left.vars();
    vars.extend(ax.right.vars());
    vars.extend(ax.context.vars());
    let r = Renaming::fresh_for(&atoms, &vars, &BTreeSet::new(), &BTreeSet::new(), supply);
    let out = Axiom {
        name: ax.name.clone(),
        context: r.context(&ax.context),
        left: r.term(&ax.left),
        right: r.term(&ax.right),
    };
    (out, r.fresh_atoms())
}

/// One application of an axiom (either orientation) anywhere in `v.term`.
fn successors(axioms: &[Axiom], delta: &FreshCtx, v: &Variant, supply: &mut NameSupply) -> Vec<Variant> {
    let mut out = Vec::new();
    let positions = v.term.nonvariable_positions();
    let ctx = delta.union(&v.context);
    for ax in axioms {
        for flip in [false, true] {
            let (fa, new_atoms) = freshen_axiom(ax, supply);
            let (l, r) = if flip { (&fa.right, &fa.left) } else { (&fa.left, &fa.right) };
            if l.is_susp() {
                continue;
            }
            let pattern = TermInCtx::new(fa.context.clone(), l.clone());
            for p in &positions {
                let sub = v.term.subterm_at(p).expect("own position");
                let Some(sol) = nominal_match(&pattern, &TermInCtx::new(ctx.clone(), sub.clone())) else {
                    continue;
                };
                if !sol.context.iter().all(|(a, x)| ctx.contains(a, x) || new_atoms.contains(&a)) {
                    continue;
                }
                let mut fresh = v.fresh.clone();
                fresh.extend(new_atoms.iter().copied());
                let replaced = v.term.replace_at(p, sol.subst.apply(r)).expect("own position");
                let widened = settle_fresh_atoms(&v.context, &fresh, &[&replaced]);
                let term = simplify_suspensions(&delta.union(&widened), &replaced);
                let context = settle_fresh_atoms(&widened, &fresh, &[&term]);
                out.push(Variant { term, context, fresh, depth: v.depth + 1 });
            }
        }
    }
    out
}

/// Every variant reachable in at most `depth` axiom applications,
/// breadth-first, the start term first.
pub fn variants(axioms: &[Axiom], depth: usize, delta: &FreshCtx, t: &Term, supply: &mut NameSupply) -> Vec<Variant> {
    let start = Variant { term: t.clone(), context: FreshCtx::new(), fresh: BTreeSet::new(), depth: 0 };
    let mut all = vec![start];
    let mut frontier = 0;
    for _ in 0..depth {
        let end = all.len();
        for i in frontier..end {
            for w in successors(axioms, delta, &all[i].clone(), supply) {
                let size = w.term.size();
                let known = all.iter().any(|u| {
                    u.term.size() == size
                        && check_alpha(&delta.union(&u.context).union(&w.context), &u.term, &w.term)
                });
                if !known {
                    all.push(w);
                }
            }
        }
        frontier = end;
    }
    all
}
