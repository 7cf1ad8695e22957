//! Flooding BFS trees plus broadcast and convergecast over them.
//!
//! A broadcast or convergecast costs rounds equal to the realized tree depth
//! and one message per tree edge; values move one level per round.

use super::ledger::{Phase, RoundLedger};
use crate::graph::Graph;

/// Rooted spanning structure of bounded depth.
#[derive(Debug, Clone)]
pub struct BfsTree {
    root: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    depth: Vec<Option<usize>>,
    /// Nodes grouped by depth; `layers[0] == [root]`.
    layers: Vec<Vec<usize>>,
    depth_limit: usize,
    reached: usize,
}

impl BfsTree {
    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, u: usize) -> Option<usize> {
        self.parent[u]
    }

    pub fn children(&self, u: usize) -> &[usize] {
        &self.children[u]
    }

    pub fn depth_of(&self, u: usize) -> Option<usize> {
        self.depth[u]
    }

    pub fn contains(&self, u: usize) -> bool {
        self.depth[u].is_some()
    }

    /// Depth of the deepest reached node.
    pub fn realized_depth(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn depth_limit(&self) -> usize {
        self.depth_limit
    }

    /// Number of reached nodes (including the root).
    pub fn reached(&self) -> usize {
        self.reached
    }

    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }
}

/// Builds a BFS tree from `root`, truncated at `depth_cap`, by synchronous
/// flooding: one level per round, each frontier node announcing on all its
/// edges, ties (several potential parents in the same round) broken by the
/// smallest sender id. Charges rounds equal to the realized depth.
pub fn build_bfs(g: &Graph, root: usize, depth_cap: usize, ledger: &mut RoundLedger) -> BfsTree {
    let n = g.node_count();
    let mut tree = BfsTree {
        root,
        parent: vec![None; n],
        children: vec![Vec::new(); n],
        depth: vec![None; n],
        layers: vec![vec![root]],
        depth_limit: depth_cap,
        reached: 1,
    };
    tree.depth[root] = Some(0);
    extend_bfs(g, &mut tree, depth_cap, ledger);
    tree
}

/// Extends an existing tree level by level up to `new_cap`, charging one
/// round (and the frontier's announcements) per newly realized level. The
/// exact-length algorithm uses this to deepen its tree incrementally.
pub fn extend_bfs(g: &Graph, tree: &mut BfsTree, new_cap: usize, ledger: &mut RoundLedger) {
    tree.depth_limit = tree.depth_limit.max(new_cap);
    while tree.realized_depth() < new_cap {
        let frontier = tree.layers.last().unwrap().clone();
        let announcements: u64 = frontier.iter().map(|&u| g.degree(u) as u64).sum();
        let next_depth = tree.realized_depth() + 1;
        let mut next_layer = Vec::new();
        for &u in &frontier {
            // frontier is in ascending id order, so the first announcer wins
            for &v in g.neighbors(u) {
                if tree.depth[v].is_none() {
                    tree.depth[v] = Some(next_depth);
                    tree.parent[v] = Some(u);
                    tree.children[u].push(v);
                    next_layer.push(v);
                }
            }
        }
        if next_layer.is_empty() {
            break;
        }
        next_layer.sort_unstable();
        tree.layers.push(next_layer);
        tree.reached = tree.depth.iter().filter(|d| d.is_some()).count();
        ledger.add_rounds(Phase::Bfs, 1);
        ledger.add_messages(Phase::Bfs, announcements);
        for &u in &frontier {
            // the announcement carries the sender id
            for _ in 0..g.degree(u) {
                ledger.note_payload(u as u128);
            }
        }
    }
}

/// Delivers `value` from the root to every tree node; `depth` rounds, one
/// message per tree edge. Returns the per-node received value.
pub fn broadcast(tree: &BfsTree, value: u128, ledger: &mut RoundLedger) -> Vec<Option<u128>> {
    let mut received = vec![None; tree.parent.len()];
    received[tree.root] = Some(value);
    for layer in tree.layers.iter().skip(1) {
        for &u in layer {
            received[u] = received[tree.parent[u].unwrap()];
            ledger.note_payload(value);
        }
    }
    ledger.add_rounds(Phase::Selection, tree.realized_depth() as u64);
    ledger.add_messages(Phase::Selection, (tree.reached - 1) as u64);
    received
}

/// Leaf-to-root aggregation of per-node values with `combine`, optionally
/// clamped at `saturation` on every hop; `depth` rounds, one message per
/// tree edge.
fn converge_with(
    tree: &BfsTree,
    values: &[u128],
    combine: impl Fn(u128, u128) -> u128,
    saturation: Option<u128>,
    ledger: &mut RoundLedger,
) -> u128 {
    let clamp = |x: u128| saturation.map_or(x, |cap| x.min(cap));
    let mut acc: Vec<u128> = values.to_vec();
    for layer in tree.layers.iter().rev() {
        for &u in layer {
            acc[u] = clamp(acc[u]);
            if let Some(p) = tree.parent[u] {
                ledger.note_payload(acc[u]);
                acc[p] = clamp(combine(acc[p], acc[u]));
            }
        }
    }
    ledger.add_rounds(Phase::Selection, tree.realized_depth() as u64);
    ledger.add_messages(Phase::Selection, (tree.reached - 1) as u64);
    acc[tree.root]
}

/// Exact sum of the tree nodes' grid values at the root.
pub fn converge_sum(
    tree: &BfsTree,
    values: &[u128],
    saturation: Option<u128>,
    ledger: &mut RoundLedger,
) -> u128 {
    converge_with(tree, values, |a, b| a.saturating_add(b), saturation, ledger)
}

pub(crate) fn converge_min(tree: &BfsTree, values: &[u128], ledger: &mut RoundLedger) -> u128 {
    converge_with(tree, values, u128::min, None, ledger)
}

pub(crate) fn converge_max(tree: &BfsTree, values: &[u128], ledger: &mut RoundLedger) -> u128 {
    converge_with(tree, values, u128::max, None, ledger)
}

/// Counts tree nodes satisfying `pred` (a 0/1 convergecast).
pub(crate) fn converge_count(
    tree: &BfsTree,
    pred: impl Fn(usize) -> bool,
    ledger: &mut RoundLedger,
) -> u64 {
    let ones: Vec<u128> = (0..tree.parent.len())
        .map(|u| u128::from(tree.contains(u) && pred(u)))
        .collect();
    converge_with(tree, &ones, |a, b| a + b, None, ledger) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, path};

    #[test]
    fn complete_graph_tree_is_one_level() {
        let g = complete(5).unwrap();
        let mut ledger = RoundLedger::new();
        let tree = build_bfs(&g, 0, 10, &mut ledger);
        assert_eq!(tree.realized_depth(), 1);
        assert_eq!(tree.children(0), &[1, 2, 3, 4]);
        assert!((1..5).all(|u| tree.parent(u) == Some(0)));
        assert_eq!(ledger.bfs.rounds, 1);
    }

    #[test]
    fn depth_cap_truncates() {
        let g = path(5).unwrap();
        let mut ledger = RoundLedger::new();
        let tree = build_bfs(&g, 0, 2, &mut ledger);
        assert_eq!(tree.reached(), 3);
        assert!(tree.contains(2) && !tree.contains(3));
        assert_eq!(ledger.bfs.rounds, 2);
    }

    #[test]
    fn cycle_six_has_depth_three() {
        let g = cycle(6).unwrap();
        let mut ledger = RoundLedger::new();
        let tree = build_bfs(&g, 0, usize::MAX, &mut ledger);
        assert_eq!(tree.realized_depth(), 3);
        assert_eq!(ledger.bfs.rounds, 3);
        // node 3 is reachable from both 2 and 4; the smaller sender id wins
        assert_eq!(tree.parent(3), Some(2));
    }

    #[test]
    fn extension_charges_only_new_levels() {
        let g = path(6).unwrap();
        let mut ledger = RoundLedger::new();
        let mut tree = build_bfs(&g, 0, 1, &mut ledger);
        assert_eq!(ledger.bfs.rounds, 1);
        extend_bfs(&g, &mut tree, 3, &mut ledger);
        assert_eq!(ledger.bfs.rounds, 3);
        assert_eq!(tree.reached(), 4);
    }

    #[test]
    fn converge_sum_of_ones() {
        let g = complete(4).unwrap();
        let mut ledger = RoundLedger::new();
        let tree = build_bfs(&g, 0, 10, &mut ledger);
        let before = ledger.selection.rounds;
        let total = converge_sum(&tree, &[1, 1, 1, 1], None, &mut ledger);
        assert_eq!(total, 4);
        assert_eq!(ledger.selection.rounds - before, 1);
    }

    #[test]
    fn broadcast_then_converge_echoes() {
        let g = path(5).unwrap();
        let mut ledger = RoundLedger::new();
        let tree = build_bfs(&g, 0, 10, &mut ledger);
        let before = ledger.selection.rounds;
        let received = broadcast(&tree, 42, &mut ledger);
        assert!(received.iter().all(|v| *v == Some(42)));
        let echoed = converge_max(&tree, &[42, 0, 0, 0, 0], &mut ledger);
        assert_eq!(echoed, 42);
        assert_eq!(ledger.selection.rounds - before, 2 * tree.realized_depth() as u64);
    }

    #[test]
    fn converge_over_deep_path_charges_depth() {
        let g = path(5).unwrap();
        let mut ledger = RoundLedger::new();
        let tree = build_bfs(&g, 0, 10, &mut ledger);
        let before = ledger.selection.rounds;
        converge_sum(&tree, &[1; 5], None, &mut ledger);
        assert_eq!(ledger.selection.rounds - before, 4);
    }
}
