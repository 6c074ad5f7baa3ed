use std::collections::BTreeSet;

use thiserror::Error;

use super::{closed_rewrite_steps_with, rewrite_steps, steps_at, DerivationStep, Mode, RewriteRule, TheoryPresentation};
use crate::alpha::settle_fresh_atoms;
use crate::equational::{e_equal, nominal_match, Axiom};
use crate::syntax::{Atom, FreshCtx, NameSupply, Renaming, Term, TermInCtx};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    LeftmostInnermost,
    LeftmostOutermost,
}

#[derive(Clone, Debug)]
pub struct Normalized {
    pub term: Term,
    pub context: FreshCtx,
    pub trace: Vec<DerivationStep>,
    /// Fuel ran out before a normal form was reached.
    pub exhausted: bool,
}

/// First closed step under the strategy's order.
pub(crate) fn first_step(
    pres: &TheoryPresentation,
    delta: &FreshCtx,
    t: &Term,
    strategy: Strategy,
    supply: &mut NameSupply,
) -> Option<DerivationStep> {
    let positions = match strategy {
        Strategy::LeftmostInnermost => t.nonvariable_positions_postorder(),
        Strategy::LeftmostOutermost => t.nonvariable_positions(),
    };
    for p in &positions {
        for i in 0..pres.rules.len() {
            if let Some(step) = steps_at(pres, delta, t, p, i, Mode::Closed, supply).into_iter().next() {
                return Some(step);
            }
        }
    }
    None
}

/// Closed rewriting until no step applies or `fuel` steps were taken.
pub fn normalize(delta: &FreshCtx, s: &Term, pres: &TheoryPresentation, strategy: Strategy, fuel: usize) -> Normalized {
    let mut supply = NameSupply::above(delta.max_dis().max(s.max_dis()).max(pres.max_dis()));
    normalize_with(delta, s, pres, strategy, fuel, &mut supply)
}

pub fn normalize_with(
    delta: &FreshCtx,
    s: &Term,
    pres: &TheoryPresentation,
    strategy: Strategy,
    fuel: usize,
    supply: &mut NameSupply,
) -> Normalized {
    let mut term = s.clone();
    let mut context = delta.clone();
    let mut junk: BTreeSet<Atom> = BTreeSet::new();
    let mut trace = Vec::new();
    loop {
        let Some(step) = first_step(pres, &context, &term, strategy, supply) else {
            return Normalized { term, context, trace, exhausted: false };
        };
        if trace.len() == fuel {
            return Normalized { term, context, trace, exhausted: true };
        }
        junk.extend(step.fresh_atoms.iter().copied());
        context = settle_fresh_atoms(&step.context, &junk, &[&step.result]);
        term = step.result.clone();
        trace.push(step);
    }
}

/// Whether `∇ ⊢ pair(l,r)` matches its own freshened variant under the
/// assumption that the new atoms are fresh for its variables.
fn closed_pair(context: &FreshCtx, l: &Term, r: &Term) -> bool {
    let t = Term::pair(l.clone(), r.clone());
    let mut supply = NameSupply::above(t.max_dis().max(context.max_dis()));
    let mut atoms = t.atoms();
    atoms.extend(context.atoms());
    let mut vars = t.vars();
    vars.extend(context.vars());
    let ren = Renaming::fresh_for(&atoms, &vars, &BTreeSet::new(), &BTreeSet::new(), &mut supply);
    let hat = ren.term(&t);
    let ext = context.union(&FreshCtx::product(&hat.atoms(), &vars));
    let pattern = TermInCtx::new(ren.context(context), hat);
    match nominal_match(&pattern, &TermInCtx::new(ext.clone(), t)) {
        Some(sol) => sol.context.is_subset(&ext),
        None => false,
    }
}

pub fn check_closed(rule: &RewriteRule) -> bool {
    closed_pair(&rule.context, &rule.lhs, &rule.rhs)
}

pub fn check_closed_axiom(ax: &Axiom) -> bool {
    closed_pair(&ax.context, &ax.left, &ax.right)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProbeError {
    #[error("the first two terms are not equal modulo the theory")]
    NotEquivalent,
    #[error("the third term is not a one-step rewrite of the first")]
    NotAStep,
}

/// Terms reachable by closed steps in at most `fuel` steps, with contexts.
fn reachable(pres: &TheoryPresentation, delta: &FreshCtx, t: &Term, fuel: usize, supply: &mut NameSupply) -> Vec<(FreshCtx, Term)> {
    let mut all = vec![(delta.clone(), t.clone())];
    let mut frontier = 0;
    for _ in 0..fuel {
        let end = all.len();
        for i in frontier..end {
            let (ctx, u) = all[i].clone();
            for step in closed_rewrite_steps_with(&ctx, &u, pres, supply) {
                let known = all.iter().any(|(c, w)| e_equal(&pres.theory, &c.union(&step.context), w, &step.result));
                if !known {
                    all.push((step.context, step.result));
                }
            }
        }
        frontier = end;
    }
    all
}

/// Searches for a joining of `t3` and a one-step successor of `t2`, given
/// `Δ ⊢ t1 ≈ t2` and `Δ ⊢ t1 → t3`. `Ok(false)` only means no joining was
/// found within `fuel`.
pub fn coherence_probe(
    delta: &FreshCtx,
    t1: &Term,
    t2: &Term,
    t3: &Term,
    pres: &TheoryPresentation,
    fuel: usize,
) -> Result<bool, ProbeError> {
    if !e_equal(&pres.theory, delta, t1, t2) {
        return Err(ProbeError::NotEquivalent);
    }
    let mut supply = NameSupply::above(
        delta.max_dis().max(t1.max_dis()).max(t2.max_dis()).max(t3.max_dis()).max(pres.max_dis()),
    );
    let mut first = rewrite_steps(delta, t1, pres);
    first.extend(closed_rewrite_steps_with(delta, t1, pres, &mut supply));
    if !first.iter().any(|s| e_equal(&pres.theory, &delta.union(&s.context), &s.result, t3)) {
        return Err(ProbeError::NotAStep);
    }
    let left = reachable(pres, delta, t3, fuel, &mut supply);
    for step in closed_rewrite_steps_with(delta, t2, pres, &mut supply) {
        let right = reachable(pres, &step.context, &step.result, fuel.saturating_sub(1), &mut supply);
        for (c4, t4) in &left {
            for (c6, t6) in &right {
                if e_equal(&pres.theory, &c4.union(c6), t4, t6) {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}
