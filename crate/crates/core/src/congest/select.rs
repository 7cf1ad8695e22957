//! Distributed selection: the root of a BFS tree learns the exact sum of the
//! `R` smallest keys by binary-searching the key grid with broadcasts and
//! convergecasts, then rank-selecting among tied keys by node id.
//!
//! Nodes beyond the tree's depth cap all hold the same known key (the walk
//! has zero mass there), so the root folds them in analytically from their
//! count — no extra communication is required for them.

use super::bfs::{broadcast, converge_count, converge_max, converge_min, converge_sum, BfsTree};
use super::ledger::RoundLedger;

/// Nodes outside the tree, all sharing one key value the root knows.
#[derive(Debug, Clone, Copy)]
pub struct OutsideKeys {
    pub count: usize,
    pub key: u128,
}

/// Root-side outcome of one selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Selection {
    /// Exact sum of the `R` smallest keys (clamped when `saturation` hit).
    pub sum: u128,
    /// Pinned threshold key: every key below it qualifies outright.
    pub threshold: u128,
    /// Number of keys strictly below the threshold.
    pub below: usize,
    /// Keys equal to the threshold that were taken to reach `R`.
    pub taken_at_threshold: usize,
    /// Largest qualifying in-tree node id at the threshold, when the tie
    /// actually had to be broken.
    pub tie_id_cutoff: Option<usize>,
    /// Whether the saturation clamp engaged (the reported sum is then a
    /// lower bound, which still decides any `sum < saturation` test).
    pub saturated: bool,
}

/// Computes the sum of the `r` smallest keys over the tree nodes plus the
/// `outside` multiset. Ties at the threshold are broken by ascending node id
/// (in-tree nodes first). `saturation` clamps every partial sum on the wire,
/// keeping aggregate messages as narrow as the keys themselves.
pub fn select_sum_smallest(
    tree: &BfsTree,
    keys: &[u128],
    r: usize,
    outside: Option<OutsideKeys>,
    saturation: Option<u128>,
    ledger: &mut RoundLedger,
) -> Selection {
    let (out_count, out_key) = outside.map_or((0, 0), |o| (o.count, o.key));
    let in_count = converge_count(tree, |_| true, ledger) as usize;
    debug_assert_eq!(in_count, tree.reached());
    let total = in_count + out_count;
    assert!(r >= 1 && r <= total, "selection size {r} out of range 1..={total}");

    let clamp = |x: u128| saturation.map_or(x, |cap| x.min(cap));

    // key range
    let mut lo = converge_min(tree, keys, ledger);
    let mut hi = converge_max(tree, keys, ledger);
    if out_count > 0 {
        lo = lo.min(out_key);
        hi = hi.max(out_key);
    }

    // pin the smallest threshold whose cumulative count reaches r
    let count_le = |mid: u128, ledger: &mut RoundLedger| -> usize {
        broadcast(tree, mid, ledger);
        let in_tree = converge_count(tree, |u| keys[u] <= mid, ledger) as usize;
        in_tree + if out_count > 0 && out_key <= mid { out_count } else { 0 }
    };
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if count_le(mid, ledger) >= r {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let threshold = lo;

    // strictly-below count and sum, plus the tie population at the threshold
    broadcast(tree, threshold, ledger);
    let in_below = converge_count(tree, |u| keys[u] < threshold, ledger) as usize;
    let in_at = converge_count(tree, |u| keys[u] == threshold, ledger) as usize;
    let below_values: Vec<u128> = (0..keys.len())
        .map(|u| if tree.contains(u) && keys[u] < threshold { keys[u] } else { 0 })
        .collect();
    let in_sum_below = converge_sum(tree, &below_values, saturation, ledger);

    let out_below = if out_count > 0 && out_key < threshold { out_count } else { 0 };
    let below = in_below + out_below;
    let mut sum = clamp(in_sum_below.saturating_add(clamp((out_below as u128).saturating_mul(out_key))));

    let need = r - below;
    let need_in_tree = need.min(in_at);
    let tie_id_cutoff = if need_in_tree > 0 && need_in_tree < in_at {
        // rank-select the qualifying ids among equal keys
        let mut id_lo = 0usize;
        let mut id_hi = keys.len() - 1;
        while id_lo < id_hi {
            let mid = id_lo + (id_hi - id_lo) / 2;
            broadcast(tree, mid as u128, ledger);
            let cnt =
                converge_count(tree, |u| keys[u] == threshold && u <= mid, ledger) as usize;
            if cnt >= need_in_tree {
                id_hi = mid;
            } else {
                id_lo = mid + 1;
            }
        }
        Some(id_lo)
    } else {
        None
    };

    sum = clamp(sum.saturating_add(clamp((need as u128).saturating_mul(threshold))));
    Selection {
        sum,
        threshold,
        below,
        taken_at_threshold: need,
        tie_id_cutoff,
        saturated: saturation.is_some_and(|cap| sum >= cap),
    }
}
