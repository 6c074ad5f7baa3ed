//! Narrowing and closed narrowing modulo a theory, basic positions, the
//! breadth-first narrowing tree, and the correspondence with rewriting.

mod lifting;
mod tree;

use std::collections::BTreeSet;

use crate::alpha::{prune_fresh_atoms, simplify_suspensions};
use crate::equational::{e_unify, Solution, TheoryE, UnifProblem};
use crate::rewriting::{first_step, RewriteRule, Strategy, TheoryPresentation};
use crate::syntax::{Atom, FreshCtx, NameSupply, Position, Subst, Term, TermInCtx};

pub use crate::rewriting::Mode;
pub use lifting::{lift_narrowing_to_rewriting, project_rewriting_to_narrowing, LiftError, Projection};
pub use tree::{NarrowingTree, TreeConfig, TreeReport};

/// The rule application that produced a node.
#[derive(Clone, Debug)]
pub struct NarrowStep {
    pub rule: String,
    pub rule_index: usize,
    pub position: Position,
    pub solution: Solution,
    pub instance: RewriteRule,
    /// The step was a rewrite step: its substitution binds only rule
    /// variables.
    pub by_rewriting: bool,
}

#[derive(Clone, Debug)]
pub struct NarrowingNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub depth: usize,
    pub context: FreshCtx,
    pub term: Term,
    /// `θ0θ1…θ(i-1)`.
    pub accumulated_subst: Subst,
    pub basic_positions: BTreeSet<Position>,
    pub step: Option<NarrowStep>,
    /// Atoms generated anywhere on the path from the root.
    pub fresh_atoms: BTreeSet<Atom>,
    /// Some unifier stream that produced this node's children was cut at the
    /// fixed-point budget.
    pub truncated: bool,
}

impl NarrowingNode {
    pub fn root(root: &TermInCtx) -> NarrowingNode {
        NarrowingNode {
            id: 0,
            parent: None,
            depth: 0,
            context: root.context.clone(),
            term: root.term.clone(),
            accumulated_subst: Subst::id(),
            basic_positions: root.term.nonvariable_positions().into_iter().collect(),
            step: None,
            fresh_atoms: BTreeSet::new(),
            truncated: false,
        }
    }

    /// The substitution of the step into this node.
    pub fn theta(&self) -> Subst {
        self.step.as_ref().map(|s| s.solution.subst.clone()).unwrap_or_default()
    }
}

/// `(U − {C ∈ U | p ≤ C}) ∪ {p.C | C ∈ Pos(r)}` with `Pos(r)` the
/// non-variable positions of `r`.
pub fn basic_update(u: &BTreeSet<Position>, p: &Position, rhs: &Term) -> BTreeSet<Position> {
    let mut out: BTreeSet<Position> = u.iter().filter(|c| !p.is_prefix_of(c)).cloned().collect();
    out.extend(rhs.nonvariable_positions().iter().map(|c| p.concat(c)));
    out
}

/// Whether the sequence of (position, right-hand side) steps is based on
/// `u0`.
pub fn is_based<'a>(u0: BTreeSet<Position>, steps: impl IntoIterator<Item = (&'a Position, &'a Term)>) -> bool {
    let mut u = u0;
    for (p, r) in steps {
        if !u.contains(p) {
            return false;
        }
        u = basic_update(&u, p, r);
    }
    true
}

/// A derivation from its root is basic iff its steps are based on the
/// non-variable positions of the root term.
pub fn is_basic(derivation: &[NarrowingNode]) -> bool {
    let Some(root) = derivation.first() else {
        return true;
    };
    let u0 = root.term.nonvariable_positions().into_iter().collect();
    is_based(u0, derivation[1..].iter().filter_map(|n| n.step.as_ref()).map(|s| (&s.position, &s.instance.rhs)))
}

fn head_clash(theory: &TheoryE, l: &Term, s: &Term) -> bool {
    if matches!(theory, TheoryE::AxiomSet { .. }) {
        return false;
    }
    match (l, s) {
        (Term::App(f, _), Term::App(g, _)) => f.name != g.name,
        (Term::App(..), Term::Atom(_) | Term::Abs(..)) | (Term::Abs(..), Term::App(..) | Term::Atom(_)) => true,
        _ => false,
    }
}

/// The node term and the images of its accumulated substitution: generated
/// atoms constrained in either stay constrained.
fn live_terms<'a>(term: &'a Term, acc: &'a Subst) -> Vec<&'a Term> {
    std::iter::once(term).chain(acc.iter().map(|(_, t)| t)).collect()
}

/// Children of `node` obtained with rule `rule_index` at `pos`; the flag
/// reports fixed-point truncation.
pub(crate) fn narrow_at(
    pres: &TheoryPresentation,
    node: &NarrowingNode,
    pos: &Position,
    rule_index: usize,
    mode: Mode,
    budget: usize,
    supply: &mut NameSupply,
) -> (Vec<NarrowingNode>, bool) {
    let Ok(sub) = node.term.subterm_at(pos) else {
        return (Vec::new(), false);
    };
    let rule = &pres.rules[rule_index];
    if sub.is_susp() || head_clash(&pres.theory, &rule.lhs, sub) {
        return (Vec::new(), false);
    }
    supply.bump_above(node.context.max_dis().max(node.term.max_dis()).max(pres.max_dis()));
    let first_new = supply.peek();
    let (fr, ren) = rule.freshen(mode, supply);
    let junk = ren.fresh_atoms();
    let mut vars = node.context.vars();
    node.term.collect_vars(&mut vars);
    let ext = node.context.union(&FreshCtx::product(&junk, &vars));
    let problem = UnifProblem::single(
        TermInCtx::new(fr.context.clone(), fr.lhs.clone()),
        TermInCtx::new(ext, sub.clone()),
    );
    let mut all_junk = node.fresh_atoms.clone();
    all_junk.extend(junk.iter().copied());
    let replaced = node.term.replace_at(pos, fr.rhs.clone()).expect("valid position");
    let mut unifiers = e_unify(&pres.theory, &problem, budget, supply);
    let mut out: Vec<NarrowingNode> = Vec::new();
    for sol in unifiers.by_ref() {
        let raw = sol.subst.apply(&replaced);
        let term = simplify_suspensions(&sol.context, &raw);
        // Everything the supply handed out during this step is globally fresh.
        let mut fresh = all_junk.clone();
        fresh.extend(term.atoms().into_iter().filter(|a| a.dis >= first_new));
        fresh.extend(sol.context.atoms().into_iter().filter(|a| a.dis >= first_new));
        let acc = node.accumulated_subst.compose(&sol.subst);
        let context = prune_fresh_atoms(&sol.context, &fresh, &live_terms(&term, &acc));
        if out.iter().any(|o| o.term == term && o.context == context && o.theta() == sol.subst) {
            continue;
        }
        out.push(NarrowingNode {
            id: 0,
            parent: Some(node.id),
            depth: node.depth + 1,
            context,
            term,
            accumulated_subst: acc,
            basic_positions: basic_update(&node.basic_positions, pos, &fr.rhs),
            step: Some(NarrowStep {
                rule: rule.name.clone(),
                rule_index,
                position: pos.clone(),
                solution: sol,
                instance: fr.clone(),
                by_rewriting: false,
            }),
            fresh_atoms: fresh,
            truncated: false,
        });
    }
    (out, unifiers.truncated())
}

/// All one-step narrowings of `node`: rules in order, non-variable
/// positions in pre-order. With `basic`, only positions in the node's basic
/// set are used.
pub fn narrow_steps(
    pres: &TheoryPresentation,
    node: &NarrowingNode,
    mode: Mode,
    basic: bool,
    budget: usize,
    supply: &mut NameSupply,
) -> (Vec<NarrowingNode>, bool) {
    let mut out = Vec::new();
    let mut truncated = false;
    let positions = node.term.nonvariable_positions();
    for i in 0..pres.rules.len() {
        for p in &positions {
            if basic && !node.basic_positions.contains(p) {
                continue;
            }
            let (children, t) = narrow_at(pres, node, p, i, mode, budget, supply);
            truncated |= t;
            out.extend(children);
        }
    }
    (out, truncated)
}

/// The leftmost-innermost closed rewrite step of `node`, as a narrowing
/// child whose substitution leaves the node's variables alone.
pub(crate) fn rewrite_child(pres: &TheoryPresentation, node: &NarrowingNode, supply: &mut NameSupply) -> Option<NarrowingNode> {
    let step = first_step(pres, &node.context, &node.term, Strategy::LeftmostInnermost, supply)?;
    let mut fresh = node.fresh_atoms.clone();
    fresh.extend(step.fresh_atoms.iter().copied());
    let context = prune_fresh_atoms(&step.context, &fresh, &live_terms(&step.result, &node.accumulated_subst));
    Some(NarrowingNode {
        id: 0,
        parent: Some(node.id),
        depth: node.depth + 1,
        context,
        term: step.result,
        accumulated_subst: node.accumulated_subst.clone(),
        basic_positions: basic_update(&node.basic_positions, &step.position, &step.instance.rhs),
        step: Some(NarrowStep {
            rule: step.rule,
            rule_index: step.rule_index,
            position: step.position,
            solution: step.solution,
            instance: step.instance,
            by_rewriting: true,
        }),
        fresh_atoms: fresh,
        truncated: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_update_by_hand() {
        let u: BTreeSet<Position> = [vec![], vec![0], vec![1]].into_iter().map(Position).collect();
        let rhs = Term::app(crate::syntax::FuncSymbol::new("g", 0), vec![]);
        let out = basic_update(&u, &Position(vec![0]), &rhs);
        let want: BTreeSet<Position> = [vec![], vec![1], vec![0]].into_iter().map(Position).collect();
        assert_eq!(out, want);
        let x = Term::var(crate::syntax::Var::new("X"));
        assert_eq!(basic_update(&u, &Position::root(), &x), BTreeSet::new());
        assert!(is_basic(&[]));
    }
}
