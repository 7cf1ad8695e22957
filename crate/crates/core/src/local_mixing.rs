//! Distributed local-mixing-time computation on the simulator: the
//! doubling-length 2-approximation and the unit-increment exact variant.
//!
//! Per candidate length the algorithm floods walk probabilities in fixed
//! point, then for each set size `R` on the `(1+eps)` grid every node forms
//! `x_u = |w(u) - nint(n^c/R)/n^c|` and the root checks whether the sum of
//! the `R` smallest keys stays below `4*eps`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::congest::bfs::{build_bfs, extend_bfs, BfsTree};
use crate::congest::estimate::{
    simulate_rw_probability, simulate_step, validate_graph, EstimateOptions, RegularityPolicy,
};
use crate::congest::fixed::{
    check_capacity, grid_unit, round_to_grid, FixedDist, GridValue, DEFAULT_DENOM_EXPONENT,
};
use crate::congest::ledger::RoundLedger;
use crate::congest::select::{select_sum_smallest, OutsideKeys};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::walk::step_cap;

/// Strictly increasing set sizes `ceil((1+eps)^i * n/beta)` capped at `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetSizeGrid {
    sizes: Vec<usize>,
}

impl SetSizeGrid {
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }
}

/// Builds the set-size schedule `R = n/beta, (1+eps) n/beta, ..., n`.
pub fn make_grid(n: usize, beta: f64, eps: f64) -> SetSizeGrid {
    let base = n as f64 / beta;
    let mut sizes = Vec::new();
    let mut i = 0i32;
    loop {
        let r = ((base * (1.0 + eps).powi(i)).ceil() as usize).clamp(1, n);
        if sizes.last() != Some(&r) {
            sizes.push(r);
        }
        if r == n {
            break;
        }
        i += 1;
    }
    SetSizeGrid { sizes }
}

/// Parameters for the distributed algorithms. `eps` is both the closeness
/// threshold (via the `4*eps` check) and, unless `eps_grid` overrides it,
/// the set-size growth ratio.
#[derive(Debug, Clone, Copy)]
pub struct LocalMixParams {
    pub beta: f64,
    pub eps: f64,
    pub c: u32,
    pub lazy: bool,
    pub policy: RegularityPolicy,
    /// Set-size growth ratio; defaults to `eps`.
    pub eps_grid: f64,
    /// Require `eps` instead of `4*eps` at the smallest set size.
    pub strict_first_size: bool,
    /// Random tie-breaking: every in-tree key is lifted to the `1/n^(c+2)`
    /// grid and offset by a seeded per-node value in `[n^-(c+2), n^-4]`.
    pub perturb_seed: Option<u64>,
    /// Exact variant: rebuild the BFS tree every iteration instead of
    /// extending it one level at a time.
    pub rebuild_bfs: bool,
}

impl LocalMixParams {
    pub fn new(beta: f64, eps: f64) -> Result<Self> {
        if !(beta >= 1.0) {
            return Err(Error::InfeasibleParams(format!("beta must be >= 1, got {beta}")));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InfeasibleParams(format!("eps must be in (0,1), got {eps}")));
        }
        Ok(LocalMixParams {
            beta,
            eps,
            c: DEFAULT_DENOM_EXPONENT,
            lazy: false,
            policy: RegularityPolicy::Strict,
            eps_grid: eps,
            strict_first_size: false,
            perturb_seed: None,
            rebuild_bfs: false,
        })
    }

    pub fn with_c(mut self, c: u32) -> Self {
        self.c = c;
        self
    }

    pub fn lazy(mut self) -> Self {
        self.lazy = true;
        self
    }

    pub fn allow_irregular(mut self) -> Self {
        self.policy = RegularityPolicy::AllowIrregular;
        self
    }

    pub fn with_eps_grid(mut self, eps_grid: f64) -> Self {
        self.eps_grid = eps_grid;
        self
    }

    pub fn strict_first_size(mut self) -> Self {
        self.strict_first_size = true;
        self
    }

    pub fn perturbed(mut self, seed: u64) -> Self {
        self.perturb_seed = Some(seed);
        self
    }

    pub fn rebuild_bfs(mut self) -> Self {
        self.rebuild_bfs = true;
        self
    }

    fn estimate_options(&self) -> EstimateOptions {
        EstimateOptions { lazy: self.lazy, policy: self.policy }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgoMode {
    Approx2,
    Exact,
}

/// Accepted output of a run: the length, the accepting set size, the exact
/// grid gap, and the full round/message ledger.
#[derive(Debug, Clone, Serialize)]
pub struct LocalMixingResult {
    pub ell: u64,
    pub set_size: usize,
    pub gap: GridValue,
    pub mode: AlgoMode,
    pub grid: Vec<usize>,
    pub ledger: RoundLedger,
}

fn validate_params(g: &Graph, s: usize, params: &LocalMixParams) -> Result<()> {
    let n = g.node_count();
    if s >= n {
        return Err(Error::OutOfRange { id: s, n });
    }
    validate_graph(g, params.policy)?;
    if g.is_bipartite() && !params.lazy {
        return Err(Error::BipartiteWithoutLazy);
    }
    let c_eff = params.c + if params.perturb_seed.is_some() { 2 } else { 0 };
    check_capacity(n, c_eff)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-node tie-breaking offset on the `1/n^(c+2)` grid, in
/// `[n^-(c+2), n^-4]`.
fn perturbation(seed: u64, node: usize, n: usize, c: u32) -> u128 {
    let hi = (n as u128).pow(c.saturating_sub(2).max(1));
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(splitmix64(seed) ^ node as u64));
    rng.random_range(1..=hi)
}

/// Runs the per-size checks for one flooded distribution; returns the first
/// accepting `(R, gap)` or `None`.
fn check_sizes(
    g: &Graph,
    tree: &BfsTree,
    w: &FixedDist,
    grid: &SetSizeGrid,
    params: &LocalMixParams,
    ledger: &mut RoundLedger,
) -> Result<Option<(usize, GridValue)>> {
    let n = g.node_count();
    let unit = grid_unit(n, params.c);
    let scale: u128 = if params.perturb_seed.is_some() { (n as u128).pow(2) } else { 1 };
    let denom = unit * scale;
    debug_assert!(
        (0..n).all(|u| tree.contains(u) || w.raw()[u] == 0),
        "walk mass escaped the BFS tree"
    );
    for &r in grid.sizes() {
        let target = round_to_grid(1, r as u128, unit)?;
        let mut keys: Vec<u128> = (0..n).map(|u| w.raw()[u].abs_diff(target) * scale).collect();
        if let Some(seed) = params.perturb_seed {
            for (u, key) in keys.iter_mut().enumerate() {
                if tree.contains(u) {
                    *key += perturbation(seed, u, n, params.c);
                }
            }
        }
        // nodes past the tree depth hold zero mass, hence the bare target key
        let outside = OutsideKeys { count: n - tree.reached(), key: target * scale };
        let threshold = if params.strict_first_size && r == grid.sizes()[0] {
            params.eps
        } else {
            4.0 * params.eps
        };
        let saturation = (threshold * denom as f64).ceil() as u128 + 1;
        let sel = select_sum_smallest(tree, &keys, r, Some(outside), Some(saturation), ledger);
        let gap = GridValue { numer: sel.sum, denom };
        if !sel.saturated && gap.to_f64() < threshold {
            return Ok(Some((r, gap)));
        }
    }
    Ok(None)
}

/// Doubling-length algorithm: for `ell = 1, 2, 4, ...` build a BFS tree of
/// depth `min(D, ell)`, flood for `ell` rounds, and accept the first
/// `(ell, R)` whose gap passes the `4*eps` check. When `tau * phi(S)` is
/// small for the local mixing set this outputs at most twice the local
/// mixing time.
pub fn approx_local_mixing(g: &Graph, s: usize, params: &LocalMixParams) -> Result<LocalMixingResult> {
    validate_params(g, s, params)?;
    let n = g.node_count();
    let grid = make_grid(n, params.beta, params.eps_grid);
    let diameter = g.diameter().ok_or(Error::Disconnected)?;
    let cap = step_cap(n);
    let mut ledger = RoundLedger::new();
    let mut ell: u64 = 1;
    while ell <= cap {
        let tree = build_bfs(g, s, diameter.min(ell as usize), &mut ledger);
        let w = simulate_rw_probability(g, s, ell, params.c, params.estimate_options(), &mut ledger)?;
        if let Some((set_size, gap)) = check_sizes(g, &tree, &w, &grid, params, &mut ledger)? {
            return Ok(LocalMixingResult {
                ell,
                set_size,
                gap,
                mode: AlgoMode::Approx2,
                grid: grid.sizes().to_vec(),
                ledger,
            });
        }
        ell *= 2;
    }
    Err(Error::ExceededCap(cap))
}

/// Unit-increment variant: advances the running distribution one flooding
/// round per iteration and deepens the BFS tree as the ball grows, so the
/// accepted length is minimal for the grid acceptance rule. Works on any
/// (regular) graph with no condition on `tau * phi`.
pub fn exact_local_mixing(g: &Graph, s: usize, params: &LocalMixParams) -> Result<LocalMixingResult> {
    validate_params(g, s, params)?;
    let n = g.node_count();
    let grid = make_grid(n, params.beta, params.eps_grid);
    let diameter = g.diameter().ok_or(Error::Disconnected)?;
    let cap = step_cap(n);
    let mut ledger = RoundLedger::new();
    let mut w = FixedDist::delta(g, s, params.c)?;
    let mut tree: Option<BfsTree> = None;
    let mut ell: u64 = 1;
    while ell <= cap {
        let depth = diameter.min(ell as usize);
        let tree_ref = if params.rebuild_bfs || tree.is_none() {
            tree.insert(build_bfs(g, s, depth, &mut ledger))
        } else {
            let t = tree.as_mut().unwrap();
            extend_bfs(g, t, depth, &mut ledger);
            t
        };
        w = simulate_step(g, &w, params.estimate_options(), &mut ledger)?;
        if let Some((set_size, gap)) = check_sizes(g, tree_ref, &w, &grid, params, &mut ledger)? {
            return Ok(LocalMixingResult {
                ell,
                set_size,
                gap,
                mode: AlgoMode::Exact,
                grid: grid.sizes().to_vec(),
                ledger,
            });
        }
        ell += 1;
    }
    Err(Error::ExceededCap(cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{barbell, complete, cycle};
    use crate::walk::{local_mixing_oracle, LengthSchedule, MixParams, OracleMode, DEFAULT_EPS};

    #[test]
    fn grid_matches_hand_computation() {
        assert_eq!(make_grid(100, 4.0, 0.5).sizes(), &[25, 38, 57, 85, 100]);
        assert_eq!(make_grid(64, 1.0, 0.25).sizes(), &[64]);
        assert_eq!(make_grid(8, 8.0, 1.0).sizes(), &[1, 2, 4, 8]);
    }

    #[test]
    fn grid_invariants_hold() {
        for n in [8usize, 33, 64, 100, 128] {
            for beta in [1.0, 2.0, 3.5, 8.0, n as f64] {
                for eps in [0.1, 0.25, 0.5, DEFAULT_EPS] {
                    let grid = make_grid(n, beta, eps);
                    let sizes = grid.sizes();
                    assert_eq!(sizes[0], (n as f64 / beta).ceil() as usize);
                    assert_eq!(*sizes.last().unwrap(), n);
                    for w in sizes.windows(2) {
                        assert!(w[0] < w[1]);
                        assert!(w[1] <= ((1.0 + eps) * w[0] as f64).ceil() as usize);
                    }
                    let len_bound = (beta.ln() / (1.0 + eps).ln()).ceil() as usize + 2;
                    assert!(grid.len() <= len_bound, "n={n} beta={beta} eps={eps}");
                }
            }
        }
    }

    #[test]
    fn complete_graph_accepts_at_length_one() {
        let g = complete(16).unwrap();
        let params = LocalMixParams::new(2.0, DEFAULT_EPS).unwrap();
        let res = approx_local_mixing(&g, 0, &params).unwrap();
        assert_eq!(res.ell, 1);
        assert_eq!(res.mode, AlgoMode::Approx2);
        let exact = exact_local_mixing(&g, 0, &params).unwrap();
        assert_eq!(exact.ell, 1);
    }

    #[test]
    fn approx_output_is_a_power_of_two() {
        let g = cycle(9).unwrap();
        let params = LocalMixParams::new(2.0, DEFAULT_EPS).unwrap();
        let res = approx_local_mixing(&g, 0, &params).unwrap();
        assert!(res.ell.is_power_of_two());
    }

    #[test]
    fn approx_matches_powers_of_two_oracle() {
        for (g, beta) in [(cycle(9).unwrap(), 2.0), (cycle(65).unwrap(), 1.0)] {
            let params = LocalMixParams::new(beta, DEFAULT_EPS).unwrap();
            let res = approx_local_mixing(&g, 0, &params).unwrap();
            let oracle = local_mixing_oracle(
                &g,
                0,
                &MixParams::new(beta, DEFAULT_EPS).unwrap(),
                OracleMode::AlgorithmGrid { schedule: LengthSchedule::PowersOfTwo },
            )
            .unwrap();
            assert_eq!(res.ell, oracle.tau, "n={}", g.node_count());
            assert_eq!(res.set_size, oracle.set_size);
        }
    }

    #[test]
    fn exact_and_approx_outputs_pair_up() {
        for (g, beta, irregular) in [
            (complete(16).unwrap(), 2.0, false),
            (barbell(2, 8).unwrap(), 2.0, true),
        ] {
            let mut params = LocalMixParams::new(beta, DEFAULT_EPS).unwrap();
            if irregular {
                params = params.allow_irregular();
            }
            let exact = exact_local_mixing(&g, 0, &params).unwrap();
            let approx = approx_local_mixing(&g, 0, &params).unwrap();
            assert!(
                exact.ell <= approx.ell && approx.ell <= 2 * exact.ell,
                "n={}: exact {} vs approx {}",
                g.node_count(),
                exact.ell,
                approx.ell
            );
        }
    }

    #[test]
    fn exact_matches_unit_oracle() {
        for (g, beta) in [
            (cycle(9).unwrap(), 2.0),
            (barbell(2, 8).unwrap(), 2.0),
            (complete(8).unwrap(), 4.0),
        ] {
            let params = LocalMixParams::new(beta, DEFAULT_EPS).unwrap().allow_irregular();
            let res = exact_local_mixing(&g, 0, &params).unwrap();
            let oracle = local_mixing_oracle(
                &g,
                0,
                &MixParams::new(beta, DEFAULT_EPS).unwrap(),
                OracleMode::AlgorithmGrid { schedule: LengthSchedule::Unit },
            )
            .unwrap();
            assert_eq!(res.ell, oracle.tau, "graph n={}", g.node_count());
            assert_eq!(res.set_size, oracle.set_size);
        }
    }

    #[test]
    fn strict_policy_rejects_irregular() {
        let g = barbell(2, 8).unwrap();
        let params = LocalMixParams::new(2.0, DEFAULT_EPS).unwrap();
        assert_eq!(approx_local_mixing(&g, 0, &params).unwrap_err(), Error::NotRegular);
        let relaxed = params.allow_irregular();
        assert!(approx_local_mixing(&g, 0, &relaxed).is_ok());
    }

    #[test]
    fn bipartite_needs_lazy() {
        let g = cycle(8).unwrap();
        let params = LocalMixParams::new(2.0, DEFAULT_EPS).unwrap();
        assert_eq!(exact_local_mixing(&g, 0, &params).unwrap_err(), Error::BipartiteWithoutLazy);
        assert!(exact_local_mixing(&g, 0, &params.lazy()).is_ok());
    }

    #[test]
    fn rebuild_mode_agrees_with_incremental_mode() {
        let g = cycle(9).unwrap();
        let params = LocalMixParams::new(2.0, DEFAULT_EPS).unwrap();
        let inc = exact_local_mixing(&g, 0, &params).unwrap();
        let reb = exact_local_mixing(&g, 0, &params.rebuild_bfs()).unwrap();
        assert_eq!(inc.ell, reb.ell);
        assert_eq!(inc.set_size, reb.set_size);
        assert_eq!(inc.gap, reb.gap);
        // rebuilding charges at least as many BFS rounds
        assert!(reb.ledger.bfs.rounds >= inc.ledger.bfs.rounds);
    }

    #[test]
    fn perturbed_mode_changes_little() {
        let g = complete(16).unwrap();
        let base = LocalMixParams::new(2.0, DEFAULT_EPS).unwrap();
        let det = approx_local_mixing(&g, 0, &base).unwrap();
        let per = approx_local_mixing(&g, 0, &base.perturbed(99)).unwrap();
        assert_eq!(det.ell, per.ell);
        assert_eq!(det.set_size, per.set_size);
        // perturbations add at most n * n^-4 in value
        let lift = 16f64.powi(-3);
        assert!((det.gap.to_f64() - per.gap.to_f64()).abs() <= lift);
    }
}
