//! T-unification: closed narrowing on `pair(s,t)`, closing each node by
//! unification modulo the theory.

use std::collections::{BTreeSet, VecDeque};

use crate::alpha::{context_nf, prune_fresh_atoms, simplify_suspensions};
use crate::equational::{e_equal, e_unify, Solution, UnifProblem};
use crate::narrowing::{Mode, NarrowingNode, NarrowingTree, TreeConfig, TreeReport};
use crate::rewriting::{normalize_with, Strategy, TheoryPresentation};
use crate::syntax::{FreshCtx, NameSupply, Subst, Term, TermInCtx, Var};

/// `(Δ ⊢ s) ≈?_T (∇ ⊢ t)`.
#[derive(Clone, Debug)]
pub struct TUnifProblem {
    pub left: TermInCtx,
    pub right: TermInCtx,
}

impl TUnifProblem {
    pub fn new(left: TermInCtx, right: TermInCtx) -> TUnifProblem {
        TUnifProblem { left, right }
    }

    pub fn context(&self) -> FreshCtx {
        self.left.context.union(&self.right.context)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut v = self.left.vars();
        v.extend(self.right.vars());
        v
    }

    fn max_dis(&self) -> u32 {
        self.left.max_dis().max(self.right.max_dis())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TUnifConfig {
    pub max_depth: usize,
    pub fp_budget: usize,
    pub max_solutions: Option<usize>,
    pub basic: bool,
    pub max_nodes: Option<usize>,
    /// Normalizing narrowing; see [`TreeConfig::normalize`].
    pub normalize: bool,
}

impl Default for TUnifConfig {
    fn default() -> TUnifConfig {
        TUnifConfig { max_depth: 5, fp_budget: 2, max_solutions: None, basic: false, max_nodes: Some(200_000), normalize: true }
    }
}

/// A T-unifier together with the narrowing derivation and closing unifier
/// that produced it.
#[derive(Clone, Debug)]
pub struct TSolution {
    pub context: FreshCtx,
    pub subst: Subst,
    pub derivation: Vec<NarrowingNode>,
    pub closing: Solution,
}

/// Lazy stream of T-unifiers in breadth-first order of the narrowing tree.
pub struct TUnifier<'p> {
    pres: &'p TheoryPresentation,
    tree: NarrowingTree<'p>,
    config: TUnifConfig,
    vars: BTreeSet<Var>,
    pending: VecDeque<TSolution>,
    emitted: Vec<(FreshCtx, Subst)>,
    closing_truncated: bool,
    nodes_seen: usize,
    yielded: usize,
}

impl TUnifier<'_> {
    pub fn report(&self) -> TreeReport {
        let mut r = self.tree.report();
        r.budget_truncated |= self.closing_truncated;
        r
    }

    pub fn nodes_seen(&self) -> usize {
        self.nodes_seen
    }

    fn close(&mut self, node: NarrowingNode) {
        let Some((s, t)) = node.term.as_pair() else {
            return;
        };
        let problem = UnifProblem::single(
            TermInCtx::new(node.context.clone(), s.clone()),
            TermInCtx::new(FreshCtx::new(), t.clone()),
        );
        let supply = self.tree.supply_mut();
        supply.bump_above(problem.max_dis());
        let first_new = supply.peek();
        let mut closings = e_unify(&self.pres.theory, &problem, self.config.fp_budget, supply);
        let found: Vec<Solution> = closings.by_ref().collect();
        self.closing_truncated |= closings.truncated();
        if found.is_empty() {
            return;
        }
        let derivation = self.tree.derivation(node.id);
        for mu in found {
            let sigma = node.accumulated_subst.compose(&mu.subst).restrict(&self.vars);
            let mut keep = sigma.range_vars();
            keep.extend(self.vars.difference(&sigma.domain()).copied());
            let kept: FreshCtx = mu.context.iter().filter(|(_, x)| keep.contains(x)).collect();
            let mut fresh = node.fresh_atoms.clone();
            fresh.extend(mu.context.atoms().into_iter().filter(|a| a.dis >= first_new));
            let images: Vec<Term> = sigma.iter().map(|(_, t)| t.clone()).collect();
            for t in &images {
                fresh.extend(t.atoms().into_iter().filter(|a| a.dis >= first_new));
            }
            let refs: Vec<&Term> = images.iter().collect();
            let context = prune_fresh_atoms(&kept, &fresh, &refs);
            let subst = sigma.map_images(|t| simplify_suspensions(&context, t));
            if self.emitted.iter().any(|(c, s)| *c == context && *s == subst) {
                continue;
            }
            self.emitted.push((context.clone(), subst.clone()));
            self.pending.push_back(TSolution { context, subst, derivation: derivation.clone(), closing: mu });
        }
    }
}

impl Iterator for TUnifier<'_> {
    type Item = TSolution;

    fn next(&mut self) -> Option<TSolution> {
        if self.config.max_solutions.is_some_and(|m| self.yielded >= m) {
            return None;
        }
        loop {
            if let Some(s) = self.pending.pop_front() {
                self.yielded += 1;
                return Some(s);
            }
            let node = self.tree.next()?;
            self.nodes_seen += 1;
            self.close(node);
        }
    }
}

/// Narrows `Δ ∪ ∇ ⊢ pair(s,t)` in closed mode and closes every node with
/// unification modulo the theory; solutions are restricted to the
/// variables of the problem.
pub fn t_unify<'p>(pres: &'p TheoryPresentation, problem: &TUnifProblem, config: TUnifConfig) -> TUnifier<'p> {
    let root = TermInCtx::new(problem.context(), Term::pair(problem.left.term.clone(), problem.right.term.clone()));
    let tree_config = TreeConfig {
        mode: Mode::Closed,
        basic: config.basic,
        max_depth: config.max_depth,
        fp_budget: config.fp_budget,
        max_nodes: config.max_nodes,
        normalize: config.normalize,
    };
    let supply = NameSupply::above(problem.max_dis().max(pres.max_dis()));
    TUnifier {
        pres,
        tree: NarrowingTree::with_supply(pres, &root, tree_config, supply),
        config,
        vars: problem.vars(),
        pending: VecDeque::new(),
        emitted: Vec::new(),
        closing_truncated: false,
        nodes_seen: 0,
        yielded: 0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid,
    /// Normalization ran out of fuel.
    Indeterminate,
}

pub const DEFAULT_FUEL: usize = 1000;

/// Checks `Γ ⊢ (Δ ∪ ∇)σ` and then that `sσ` and `tσ` are joinable modulo
/// the theory. `Invalid` is only conclusive for convergent presentations;
/// when fuel runs out before the traces meet the verdict is `Indeterminate`.
pub fn verify_solution(
    pres: &TheoryPresentation,
    problem: &TUnifProblem,
    context: &FreshCtx,
    subst: &Subst,
    fuel: usize,
) -> Verdict {
    let Some(needed) = context_nf(&problem.context(), subst) else {
        return Verdict::Invalid;
    };
    if !needed.is_subset(context) {
        return Verdict::Invalid;
    }
    let s = subst.apply(&problem.left.term);
    let t = subst.apply(&problem.right.term);
    if e_equal(&pres.theory, context, &s, &t) {
        return Verdict::Valid;
    }
    let mut supply =
        NameSupply::above(context.max_dis().max(s.max_dis()).max(t.max_dis()).max(pres.max_dis()));
    let ns = normalize_with(context, &s, pres, Strategy::LeftmostInnermost, fuel, &mut supply);
    let nt = normalize_with(context, &t, pres, Strategy::LeftmostInnermost, fuel, &mut supply);
    let ctx = ns.context.union(&nt.context);
    if e_equal(&pres.theory, &ctx, &ns.term, &nt.term) {
        return Verdict::Valid;
    }
    if !(ns.exhausted || nt.exhausted) {
        return Verdict::Invalid;
    }
    // Without normal forms, any common reduct still witnesses joinability.
    let reducts = |start: &Term, n: &crate::rewriting::Normalized| -> Vec<Term> {
        std::iter::once(start.clone()).chain(n.trace.iter().map(|st| st.result.clone())).collect()
    };
    let (rs, rt) = (reducts(&s, &ns), reducts(&t, &nt));
    if rs.iter().any(|u| rt.iter().any(|v| e_equal(&pres.theory, &ctx, u, v))) {
        Verdict::Valid
    } else {
        Verdict::Indeterminate
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equational::TheoryE;
    use crate::syntax::{Atom, FuncSymbol};

    #[test]
    fn trivial_problems() {
        let pres = TheoryPresentation::new(BTreeSet::new(), Vec::new(), TheoryE::Empty);
        let f = FuncSymbol::new("f", 1);
        let s = TermInCtx::bare(Term::app(f, vec![Term::var(Var::new("X"))]));
        let p = TUnifProblem::new(s.clone(), s);
        let sols: Vec<TSolution> = t_unify(&pres, &p, TUnifConfig::default()).collect();
        assert_eq!(sols.len(), 1);
        assert!(sols[0].subst.is_empty() && sols[0].context.is_empty());
        assert_eq!(verify_solution(&pres, &p, &FreshCtx::new(), &Subst::id(), DEFAULT_FUEL), Verdict::Valid);

        let a = TermInCtx::bare(Term::atom(Atom::new("a")));
        let b = TermInCtx::bare(Term::atom(Atom::new("b")));
        let p = TUnifProblem::new(a, b);
        let mut it = t_unify(&pres, &p, TUnifConfig::default());
        assert!(it.next().is_none());
        assert_eq!(it.nodes_seen(), 1);
    }
}
