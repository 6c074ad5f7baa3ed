//! Moving between narrowing derivations and rewrite traces.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{narrow_at, Mode, NarrowingNode};
use crate::alpha::{context_nf, settle_fresh_atoms};
use crate::equational::{e_equal, e_match};
use crate::rewriting::{steps_at, DerivationStep, TheoryPresentation};
use crate::syntax::{Atom, FreshCtx, NameSupply, Subst, Term, TermInCtx, Var};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LiftError {
    #[error("the substitution does not satisfy the final context")]
    Unsatisfied,
    #[error("step {0} could not be replayed")]
    StepFailed(usize),
    #[error("the image of {0} is not in normal form")]
    NotNormalized(Var),
    #[error("the trace does not start at the instantiated root")]
    SourceMismatch,
    #[error("no narrowing derivation projects the trace")]
    NoProjection,
}

/// Whether every constraint of `needed` holds in `allowed` or concerns a
/// globally fresh atom.
fn discharged(needed: &FreshCtx, allowed: &FreshCtx, fresh: &BTreeSet<Atom>) -> bool {
    needed.iter().all(|(a, x)| allowed.contains(a, x) || fresh.contains(&a))
}

/// Instantiates a narrowing derivation `s0 ~> … ~> sn` with `ρ` and replays
/// it as rewriting: step `i` rewrites `s_i ρ_i` to `s_(i+1) ρ_(i+1)` (up to
/// the theory) where `ρ_n = ρ` and `ρ_i = θ_i ρ_(i+1)`.
pub fn lift_narrowing_to_rewriting(
    pres: &TheoryPresentation,
    delta: &FreshCtx,
    derivation: &[NarrowingNode],
    rho: &Subst,
    mode: Mode,
) -> Result<Vec<DerivationStep>, LiftError> {
    let Some(last) = derivation.last() else {
        return Ok(Vec::new());
    };
    let junk = &last.fresh_atoms;
    let needed = context_nf(&last.context, rho).ok_or(LiftError::Unsatisfied)?;
    if !discharged(&needed, delta, junk) {
        return Err(LiftError::Unsatisfied);
    }
    let base = delta.union(&needed);

    let mut rhos = vec![rho.clone()];
    for node in derivation[1..].iter().rev() {
        let next = rhos.last().expect("nonempty");
        rhos.push(node.theta().compose(next));
    }
    rhos.reverse();

    let mut max = base.max_dis().max(pres.max_dis());
    for (n, r) in derivation.iter().zip(&rhos) {
        max = max.max(r.apply(&n.term).max_dis()).max(n.context.max_dis());
    }
    let mut supply = NameSupply::above(max);
    let mut trace = Vec::new();
    for i in 0..derivation.len() - 1 {
        let step = derivation[i + 1].step.as_ref().expect("non-root node has a step");
        let source = rhos[i].apply(&derivation[i].term);
        let target = rhos[i + 1].apply(&derivation[i + 1].term);
        let ctx = settle_fresh_atoms(&base, junk, &[&source]);
        let found = steps_at(pres, &ctx, &source, &step.position, step.rule_index, mode, &mut supply)
            .into_iter()
            .find(|s| {
                let c = settle_fresh_atoms(&s.context.union(&ctx), junk, &[&s.result, &target]);
                e_equal(&pres.theory, &c, &s.result, &target)
            })
            .ok_or(LiftError::StepFailed(i))?;
        trace.push(found);
    }
    Ok(trace)
}

/// A narrowing derivation mirroring a rewrite trace, with the witnesses
/// `ρ_i` relating each node to the corresponding trace term.
#[derive(Clone, Debug)]
pub struct Projection {
    pub nodes: Vec<NarrowingNode>,
    pub witnesses: Vec<Subst>,
}

fn tuple(mut ts: Vec<Term>) -> Term {
    let last = ts.pop().expect("nonempty tuple");
    ts.into_iter().rev().fold(last, |acc, t| Term::pair(t, acc))
}

struct Projector<'a> {
    pres: &'a TheoryPresentation,
    delta: &'a FreshCtx,
    trace: &'a [DerivationStep],
    mode: Mode,
    budget: usize,
    supply: NameSupply,
}

impl Projector<'_> {
    /// Depth-first search for the continuation from `node` (matching trace
    /// term `i`) under witness `rho`.
    fn search(&mut self, path: &mut Vec<NarrowingNode>, rhos: &mut Vec<Subst>, i: usize) -> bool {
        if i == self.trace.len() {
            return true;
        }
        let node = path.last().expect("nonempty").clone();
        let rho = rhos.last().expect("nonempty").clone();
        let step = &self.trace[i];
        let mut positions = node.term.nonvariable_positions();
        positions.sort_by_key(|p| *p != step.position);

        let mut trace_junk = BTreeSet::new();
        for s in &self.trace[..=i] {
            trace_junk.extend(s.fresh_atoms.iter().copied());
        }
        let allowed = self.delta.union(&step.context);
        let mut domain: Vec<Var> = node.term.vars().into_iter().collect();
        for x in node.context.vars() {
            if !domain.contains(&x) {
                domain.push(x);
            }
        }

        for p in positions {
            let (children, _) = narrow_at(self.pres, &node, &p, step.rule_index, self.mode, self.budget, &mut self.supply);
            for child in children {
                let theta = child.theta();
                let mut pats = vec![child.term.clone()];
                pats.extend(domain.iter().map(|x| theta.image_of(*x)));
                let mut subs = vec![step.result.clone()];
                subs.extend(domain.iter().map(|x| rho.image_of(*x)));
                let pattern = TermInCtx::new(child.context.clone(), tuple(pats));
                let subject = TermInCtx::new(allowed.clone(), tuple(subs));
                for m in e_match(&self.pres.theory, &pattern, &subject, &mut self.supply) {
                    let mut fresh = trace_junk.clone();
                    fresh.extend(child.fresh_atoms.iter().copied());
                    fresh.extend(m.fresh_atoms.iter().copied());
                    if !discharged(&m.solution.context, &allowed, &fresh) {
                        continue;
                    }
                    let next = m.solution.subst.restrict(&pattern.term.vars());
                    if !self.conditions_hold(&child, &rho, &next, &domain, &allowed, &fresh, step) {
                        continue;
                    }
                    let mut child = child.clone();
                    child.id = path.len();
                    child.parent = Some(path.len() - 1);
                    path.push(child);
                    rhos.push(next);
                    if self.search(path, rhos, i + 1) {
                        return true;
                    }
                    path.pop();
                    rhos.pop();
                }
            }
        }
        false
    }

    #[allow(clippy::too_many_arguments)]
    fn conditions_hold(
        &self,
        child: &NarrowingNode,
        rho: &Subst,
        next: &Subst,
        domain: &[Var],
        allowed: &FreshCtx,
        fresh: &BTreeSet<Atom>,
        step: &DerivationStep,
    ) -> bool {
        let Some(needed) = context_nf(&child.context, next) else {
            return false;
        };
        if !discharged(&needed, allowed, fresh) {
            return false;
        }
        let theta = child.theta();
        let instance = next.apply(&child.term);
        let mut terms: Vec<Term> = vec![instance.clone(), step.result.clone()];
        terms.extend(domain.iter().map(|x| rho.image_of(*x)));
        let refs: Vec<&Term> = terms.iter().collect();
        let ctx = settle_fresh_atoms(&allowed.union(&needed), fresh, &refs);
        e_equal(&self.pres.theory, &ctx, &instance, &step.result)
            && domain
                .iter()
                .all(|x| e_equal(&self.pres.theory, &ctx, &rho.image_of(*x), &next.apply(&theta.image_of(*x))))
    }
}

/// Given `Δ ⊢ s0ρ0 → t1 → … → tn` with `ρ0` normalized and satisfying `Δ0`,
/// finds a narrowing derivation from `Δ0 ⊢ s0` using the same rules,
/// together with witnesses `ρ_i` such that `Δ ⊢ Δ_i ρ_i`, `Δ ⊢ s_i ρ_i ≈ t_i`
/// and `ρ_i` agrees with `θ_i ρ_(i+1)` on the variables of node `i`. The
/// first derivation found is returned.
pub fn project_rewriting_to_narrowing(
    pres: &TheoryPresentation,
    delta: &FreshCtx,
    root: &TermInCtx,
    rho0: &Subst,
    trace: &[DerivationStep],
    mode: Mode,
    budget: usize,
) -> Result<Projection, LiftError> {
    let needed = context_nf(&root.context, rho0).ok_or(LiftError::Unsatisfied)?;
    if !needed.is_subset(delta) {
        return Err(LiftError::Unsatisfied);
    }
    for x in root.vars() {
        let image = rho0.image_of(x);
        let reducible = match mode {
            Mode::Plain => !crate::rewriting::rewrite_steps(delta, &image, pres).is_empty(),
            Mode::Closed => !crate::rewriting::closed_rewrite_steps(delta, &image, pres).is_empty(),
        };
        if reducible {
            return Err(LiftError::NotNormalized(x));
        }
    }
    let start = rho0.apply(&root.term);
    if let Some(first) = trace.first() {
        if !e_equal(&pres.theory, delta, &start, &first.source) {
            return Err(LiftError::SourceMismatch);
        }
    }

    let mut max = delta.max_dis().max(root.max_dis()).max(pres.max_dis()).max(start.max_dis());
    for (_, t) in rho0.iter() {
        max = max.max(t.max_dis());
    }
    for s in trace {
        max = max.max(s.result.max_dis()).max(s.context.max_dis()).max(s.instance.max_dis());
    }
    let mut projector = Projector { pres, delta, trace, mode, budget, supply: NameSupply::above(max) };
    let mut path = vec![NarrowingNode::root(root)];
    let mut rhos = vec![rho0.clone()];
    if projector.search(&mut path, &mut rhos, 0) {
        Ok(Projection { nodes: path, witnesses: rhos })
    } else {
        Err(LiftError::NoProjection)
    }
}
