use std::collections::VecDeque;

use super::{narrow_at, narrow_steps, rewrite_child, Mode, NarrowingNode};
use crate::rewriting::TheoryPresentation;
use crate::syntax::{NameSupply, TermInCtx};

#[derive(Clone, Copy, Debug)]
pub struct TreeConfig {
    pub mode: Mode,
    pub basic: bool,
    pub max_depth: usize,
    /// Ground-instantiation depth for fixed-point equations.
    pub fp_budget: usize,
    pub max_nodes: Option<usize>,
    /// A node with a closed rewrite step gets that step as its only child
    /// (normalizing narrowing). Complete for convergent presentations.
    pub normalize: bool,
}

impl Default for TreeConfig {
    fn default() -> TreeConfig {
        TreeConfig { mode: Mode::Closed, basic: false, max_depth: 5, fp_budget: 2, max_nodes: None, normalize: false }
    }
}

/// Why an exploration may have missed nodes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TreeReport {
    /// Some node at the depth bound still had a step.
    pub depth_limited: bool,
    /// Some unifier stream was cut at the fixed-point budget.
    pub budget_truncated: bool,
    pub node_limit_hit: bool,
}

/// Lazy breadth-first narrowing tree. Iteration yields nodes in BFS order;
/// a node's children are computed when the node is yielded.
pub struct NarrowingTree<'p> {
    pres: &'p TheoryPresentation,
    config: TreeConfig,
    nodes: Vec<NarrowingNode>,
    queue: VecDeque<usize>,
    supply: NameSupply,
    report: TreeReport,
}

impl<'p> NarrowingTree<'p> {
    pub fn new(pres: &'p TheoryPresentation, root: &TermInCtx, config: TreeConfig) -> NarrowingTree<'p> {
        let supply = NameSupply::above(root.max_dis().max(pres.max_dis()));
        NarrowingTree::with_supply(pres, root, config, supply)
    }

    pub fn with_supply(
        pres: &'p TheoryPresentation,
        root: &TermInCtx,
        config: TreeConfig,
        supply: NameSupply,
    ) -> NarrowingTree<'p> {
        NarrowingTree {
            pres,
            config,
            nodes: vec![NarrowingNode::root(root)],
            queue: VecDeque::from([0]),
            supply,
            report: TreeReport::default(),
        }
    }

    pub fn report(&self) -> TreeReport {
        self.report
    }

    pub fn nodes(&self) -> &[NarrowingNode] {
        &self.nodes
    }

    pub fn supply_mut(&mut self) -> &mut NameSupply {
        &mut self.supply
    }

    /// The path from the root to node `id`.
    pub fn derivation(&self, id: usize) -> Vec<NarrowingNode> {
        let mut path = vec![self.nodes[id].clone()];
        while let Some(p) = path.last().and_then(|n| n.parent) {
            path.push(self.nodes[p].clone());
        }
        path.reverse();
        path
    }

    fn expand(&mut self, id: usize) {
        let node = &self.nodes[id];
        if node.depth >= self.config.max_depth {
            if (self.config.normalize && rewrite_child(self.pres, node, &mut self.supply).is_some())
                || has_step(self.pres, node, self.config, &mut self.supply) {
                self.report.depth_limited = true;
            }
            return;
        }
        let rewritten = if self.config.normalize { rewrite_child(self.pres, node, &mut self.supply) } else { None };
        let (children, truncated) = match rewritten {
            Some(c) => (vec![c], false),
            None => narrow_steps(
                self.pres,
                node,
                self.config.mode,
                self.config.basic,
                self.config.fp_budget,
                &mut self.supply,
            ),
        };
        if truncated {
            self.nodes[id].truncated = true;
            self.report.budget_truncated = true;
        }
        for mut c in children {
            if self.config.max_nodes.is_some_and(|m| self.nodes.len() >= m) {
                self.report.node_limit_hit = true;
                return;
            }
            c.id = self.nodes.len();
            self.queue.push_back(c.id);
            self.nodes.push(c);
        }
    }
}

impl Iterator for NarrowingTree<'_> {
    type Item = NarrowingNode;

    fn next(&mut self) -> Option<NarrowingNode> {
        let id = self.queue.pop_front()?;
        self.expand(id);
        Some(self.nodes[id].clone())
    }
}

fn has_step(pres: &TheoryPresentation, node: &NarrowingNode, config: TreeConfig, supply: &mut NameSupply) -> bool {
    let positions = node.term.nonvariable_positions();
    (0..pres.rules.len()).any(|i| {
        positions.iter().filter(|p| !config.basic || node.basic_positions.contains(p)).any(|p| {
            !narrow_at(pres, node, p, i, config.mode, config.fp_budget, supply).0.is_empty()
        })
    })
}
