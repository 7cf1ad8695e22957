//! Centralized random-walk oracles: exact (floating-point) distributions,
//! mixing time, and local mixing time.
//!
//! The local-mixing oracle runs in two modes. Definition mode scans every
//! step count and every admissible set size against the restricted stationary
//! target with threshold `eps`. Algorithm-grid mode mirrors the distributed
//! acceptance rule instead: lengths follow a schedule, set sizes follow the
//! `(1+eps)` grid, the target is uniform `1/R`, and the threshold is `4*eps`.

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeSubset};
use crate::local_mixing::make_grid;

/// The customary accuracy parameter, `1/(8e)`.
pub const DEFAULT_EPS: f64 = 1.0 / (8.0 * std::f64::consts::E);

/// Walk-length cap, `8 n^3`; the mixing time of a connected graph sits well
/// below this for any source.
pub fn step_cap(n: usize) -> u64 {
    8 * (n as u64).pow(3)
}

/// Probability distribution of a walk, together with its step count and
/// (for walks started from a point mass) the source node.
#[derive(Debug, Clone, PartialEq)]
pub struct Dist {
    probs: Vec<f64>,
    source: Option<usize>,
    step: u64,
}

impl Dist {
    /// Point mass at `s`.
    pub fn delta(g: &Graph, s: usize) -> Result<Self> {
        let n = g.node_count();
        if s >= n {
            return Err(Error::OutOfRange { id: s, n });
        }
        let mut probs = vec![0.0; n];
        probs[s] = 1.0;
        Ok(Dist { probs, source: Some(s), step: 0 })
    }

    /// Stationary distribution, `pi(v) = d(v) / 2m`.
    pub fn stationary(g: &Graph) -> Self {
        let two_m = g.total_volume() as f64;
        let probs = (0..g.node_count()).map(|u| g.degree(u) as f64 / two_m).collect();
        Dist { probs, source: None, step: 0 }
    }

    /// Wraps an arbitrary probability vector (step 0, no source).
    pub fn from_probs(probs: Vec<f64>) -> Self {
        Dist { probs, source: None, step: 0 }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, u: usize) -> f64 {
        self.probs[u]
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn source(&self) -> Option<usize> {
        self.source
    }

    pub fn total_mass(&self) -> f64 {
        self.probs.iter().sum()
    }
}

/// One application of the walk operator: `p'(u) = sum_{v in N(u)} p(v)/d(v)`,
/// or `p'(u) = p(u)/2 + (1/2) sum_{v in N(u)} p(v)/d(v)` for the lazy walk.
pub fn step(g: &Graph, d: &Dist, lazy: bool) -> Dist {
    let n = g.node_count();
    let mut next = vec![0.0; n];
    for v in 0..n {
        let p = d.probs[v];
        if p != 0.0 {
            let share = p / g.degree(v) as f64;
            for &u in g.neighbors(v) {
                next[u] += share;
            }
        }
    }
    if lazy {
        for u in 0..n {
            next[u] = 0.5 * next[u] + 0.5 * d.probs[u];
        }
    }
    Dist { probs: next, source: d.source, step: d.step + 1 }
}

/// `|| p - pi ||_1`.
pub fn l1_to_stationary(g: &Graph, d: &Dist) -> f64 {
    let two_m = g.total_volume() as f64;
    (0..g.node_count())
        .map(|u| (d.probs[u] - g.degree(u) as f64 / two_m).abs())
        .sum()
}

fn validate_walk(g: &Graph, s: usize, eps: f64) -> Result<()> {
    if s >= g.node_count() {
        return Err(Error::OutOfRange { id: s, n: g.node_count() });
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InfeasibleParams(format!("eps must be in (0,1), got {eps}")));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

/// Least `t` with `|| p_t - pi ||_1 < eps`. Stops at the first success,
/// which is sound because the distance to stationarity never increases.
pub fn mixing_time(g: &Graph, s: usize, eps: f64, lazy: bool) -> Result<u64> {
    validate_walk(g, s, eps)?;
    if g.is_bipartite() && !lazy {
        return Err(Error::BipartiteWithoutLazy);
    }
    let cap = step_cap(g.node_count());
    let mut d = Dist::delta(g, s)?;
    loop {
        if l1_to_stationary(g, &d) < eps {
            return Ok(d.step);
        }
        if d.step >= cap {
            return Err(Error::ExceededCap(cap));
        }
        d = step(g, &d, lazy);
    }
}

/// Which restricted stationary target the gap is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapTarget {
    /// `1/R` at every node, the regular-graph target the distributed
    /// algorithm uses.
    Uniform,
    /// `d(u)/vol(S)` with the volume of the greedily chosen set itself,
    /// refined to a fixpoint; exact for general graphs.
    Degree,
}

/// Picks the `r` ids with the smallest keys, ties by ascending id; `contain`
/// forces one node into the selection.
fn smallest_keys(n: usize, key: &dyn Fn(usize) -> f64, r: usize, contain: Option<usize>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).filter(|&u| Some(u) != contain).collect();
    let take = r - usize::from(contain.is_some());
    if take > 0 {
        order.select_nth_unstable_by(take - 1, |&a, &b| {
            key(a).partial_cmp(&key(b)).unwrap().then(a.cmp(&b))
        });
        order.truncate(take);
    } else {
        order.clear();
    }
    if let Some(s) = contain {
        order.push(s);
    }
    order.sort_unstable();
    order
}

/// Sum of the `r` smallest `|p(u) - target(u)|` values and the witness set
/// attaining it. For a fixed target the greedy choice minimizes the sum over
/// all size-`r` subsets, so scanning `r` is exhaustive over set sizes.
pub fn restricted_gap(
    g: &Graph,
    d: &Dist,
    r: usize,
    target: GapTarget,
    contain: Option<usize>,
) -> (f64, NodeSubset) {
    let n = g.node_count();
    assert!(r >= 1 && r <= n, "set size {r} out of range 1..={n}");
    assert!(contain.is_none_or(|s| s < n), "contained node out of range");
    match target {
        GapTarget::Uniform => {
            let t = 1.0 / r as f64;
            let key = move |u: usize| (d.probs[u] - t).abs();
            let chosen = smallest_keys(n, &key, r, contain);
            let gap = chosen.iter().map(|&u| key(u)).sum();
            (gap, NodeSubset::new(g, chosen).unwrap())
        }
        GapTarget::Degree => {
            let mut mu = g.total_volume() as f64 * r as f64 / n as f64;
            let mut chosen = Vec::new();
            let mut volume = 0usize;
            for _ in 0..10 {
                let key = move |u: usize| (d.probs[u] - g.degree(u) as f64 / mu).abs();
                chosen = smallest_keys(n, &key, r, contain);
                volume = chosen.iter().map(|&u| g.degree(u)).sum();
                if volume as f64 == mu {
                    break;
                }
                mu = volume as f64;
            }
            let gap = chosen
                .iter()
                .map(|&u| (d.probs[u] - g.degree(u) as f64 / volume as f64).abs())
                .sum();
            (gap, NodeSubset::new(g, chosen).unwrap())
        }
    }
}

/// Local-mixing parameters: the set-size bound `beta`, accuracy `eps`, and
/// the lazy-walk flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixParams {
    pub beta: f64,
    pub eps: f64,
    pub lazy: bool,
}

impl MixParams {
    pub fn new(beta: f64, eps: f64) -> Result<Self> {
        if !(beta >= 1.0) {
            return Err(Error::InfeasibleParams(format!("beta must be >= 1, got {beta}")));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InfeasibleParams(format!("eps must be in (0,1), got {eps}")));
        }
        Ok(MixParams { beta, eps, lazy: false })
    }

    pub fn lazy(mut self) -> Self {
        self.lazy = true;
        self
    }
}

/// Walk-length schedules for algorithm-grid mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LengthSchedule {
    PowersOfTwo,
    Unit,
}

/// Acceptance rule the oracle applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    /// Threshold `eps`, all set sizes from `ceil(n/beta)` to `n`, degree
    /// target; optionally require the source inside the witness set.
    Definition { contain_source: bool },
    /// Threshold `4*eps`, `(1+eps)`-grid of set sizes, uniform target,
    /// lengths from the schedule.
    AlgorithmGrid { schedule: LengthSchedule },
}

#[derive(Debug, Clone)]
pub struct LocalMixOracleResult {
    pub tau: u64,
    pub set_size: usize,
    pub witness: NodeSubset,
    pub gap: f64,
    pub mode: OracleMode,
}

/// Smallest step count at which the walk from `s` mixes in some admissible
/// set, under the acceptance rule of `mode`.
pub fn local_mixing_oracle(
    g: &Graph,
    s: usize,
    params: &MixParams,
    mode: OracleMode,
) -> Result<LocalMixOracleResult> {
    validate_walk(g, s, params.eps)?;
    if g.is_bipartite() && !params.lazy {
        return Err(Error::BipartiteWithoutLazy);
    }
    let n = g.node_count();
    let cap = step_cap(n);
    match mode {
        OracleMode::Definition { contain_source } => {
            let r_min = ((n as f64 / params.beta).ceil() as usize).clamp(1, n);
            let contain = contain_source.then_some(s);
            let mut d = Dist::delta(g, s)?;
            loop {
                for r in r_min..=n {
                    let (gap, witness) = restricted_gap(g, &d, r, GapTarget::Degree, contain);
                    if gap < params.eps {
                        return Ok(LocalMixOracleResult {
                            tau: d.step,
                            set_size: r,
                            witness,
                            gap,
                            mode,
                        });
                    }
                }
                if d.step >= cap {
                    return Err(Error::ExceededCap(cap));
                }
                d = step(g, &d, params.lazy);
            }
        }
        OracleMode::AlgorithmGrid { schedule } => {
            let grid = make_grid(n, params.beta, params.eps);
            let threshold = 4.0 * params.eps;
            let mut d = Dist::delta(g, s)?;
            let mut len: u64 = 1;
            while len <= cap {
                while d.step < len {
                    d = step(g, &d, params.lazy);
                }
                for &r in grid.sizes() {
                    let (gap, witness) = restricted_gap(g, &d, r, GapTarget::Uniform, None);
                    if gap < threshold {
                        return Ok(LocalMixOracleResult {
                            tau: len,
                            set_size: r,
                            witness,
                            gap,
                            mode,
                        });
                    }
                }
                len = match schedule {
                    LengthSchedule::PowersOfTwo => len * 2,
                    LengthSchedule::Unit => len + 1,
                };
            }
            Err(Error::ExceededCap(cap))
        }
    }
}

/// `tau * phi(witness)`; callers judge this against a smallness threshold.
/// Errors when the witness is the full vertex set (conductance undefined).
pub fn validate_condition(g: &Graph, result: &LocalMixOracleResult) -> Result<f64> {
    let phi = g.conductance(&result.witness)?;
    Ok(result.tau as f64 * phi.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{barbell, complete, cycle, Graph};

    fn assert_close(actual: f64, expected: f64, tol: f64) {
        assert!(
            (actual - expected).abs() <= tol,
            "expected {expected}, got {actual}"
        );
    }

    #[test]
    fn one_step_on_k3() {
        let g = complete(3).unwrap();
        let d = step(&g, &Dist::delta(&g, 0).unwrap(), false);
        assert_eq!(d.probs(), &[0.0, 0.5, 0.5]);
        assert_eq!(d.step(), 1);
    }

    #[test]
    fn two_steps_on_k3() {
        let g = complete(3).unwrap();
        let d0 = Dist::delta(&g, 0).unwrap();
        let d2 = step(&g, &step(&g, &d0, false), false);
        assert_eq!(d2.probs(), &[0.5, 0.25, 0.25]);
    }

    #[test]
    fn lazy_step_on_cycle4() {
        let g = cycle(4).unwrap();
        let d = step(&g, &Dist::delta(&g, 0).unwrap(), true);
        assert_eq!(d.probs(), &[0.5, 0.25, 0.0, 0.25]);
    }

    #[test]
    fn l1_examples() {
        let g = complete(3).unwrap();
        let d1 = step(&g, &Dist::delta(&g, 0).unwrap(), false);
        assert_close(l1_to_stationary(&g, &d1), 2.0 / 3.0, 1e-15);
        assert_close(l1_to_stationary(&g, &Dist::stationary(&g)), 0.0, 1e-15);

        let k64 = complete(64).unwrap();
        let d1 = step(&k64, &Dist::delta(&k64, 0).unwrap(), false);
        assert_close(l1_to_stationary(&k64, &d1), 2.0 / 64.0, 1e-12);
    }

    #[test]
    fn stationary_is_fixed_point() {
        for g in [complete(5).unwrap(), cycle(7).unwrap(), barbell(2, 4).unwrap()] {
            let pi = Dist::stationary(&g);
            let next = step(&g, &pi, false);
            for u in 0..g.node_count() {
                assert_close(next.prob(u), pi.prob(u), 1e-14);
            }
        }
    }

    #[test]
    fn mixing_time_of_k64_is_one() {
        let g = complete(64).unwrap();
        assert_eq!(mixing_time(&g, 0, DEFAULT_EPS, false).unwrap(), 1);
    }

    #[test]
    fn mixing_time_of_k3_at_loose_eps() {
        let g = complete(3).unwrap();
        assert_eq!(mixing_time(&g, 0, 0.7, false).unwrap(), 1);
    }

    #[test]
    fn bipartite_needs_lazy() {
        let g = cycle(4).unwrap();
        assert_eq!(mixing_time(&g, 0, 0.1, false), Err(Error::BipartiteWithoutLazy));
        assert!(mixing_time(&g, 0, 0.1, true).is_ok());
    }

    #[test]
    fn disconnected_is_rejected() {
        let g = Graph::from_edge_list(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(mixing_time(&g, 0, 0.1, true), Err(Error::Disconnected));
    }

    #[test]
    fn restricted_gap_hand_example() {
        let g = complete(4).unwrap();
        let d = Dist::from_probs(vec![0.5, 0.1, 0.3, 0.1]);
        let (gap, witness) = restricted_gap(&g, &d, 2, GapTarget::Uniform, None);
        assert_close(gap, 0.2, 1e-15);
        assert_eq!(witness.members(), &[0, 2]);
    }

    #[test]
    fn restricted_gap_uniform_dist_is_zero() {
        let g = complete(5).unwrap();
        let d = Dist::from_probs(vec![0.2; 5]);
        let (gap, witness) = restricted_gap(&g, &d, 5, GapTarget::Uniform, None);
        assert_close(gap, 0.0, 1e-15);
        assert_eq!(witness.len(), 5);
    }

    #[test]
    fn restricted_gap_point_mass() {
        let g = complete(6).unwrap();
        let d = Dist::delta(&g, 2).unwrap();
        let (gap, witness) = restricted_gap(&g, &d, 5, GapTarget::Uniform, None);
        assert_close(gap, 1.0, 1e-15);
        assert_eq!(witness.members(), &[0, 1, 3, 4, 5]);
    }

    #[test]
    fn restricted_gap_containment_forces_source() {
        let g = complete(6).unwrap();
        let d = Dist::delta(&g, 2).unwrap();
        let (gap, witness) = restricted_gap(&g, &d, 5, GapTarget::Uniform, Some(2));
        assert!(witness.contains(2));
        assert!(gap > 1.0);
    }

    #[test]
    fn degree_target_matches_uniform_on_regular_graphs() {
        let g = cycle(9).unwrap();
        let mut d = Dist::delta(&g, 0).unwrap();
        for _ in 0..4 {
            d = step(&g, &d, false);
        }
        for r in [3, 5, 9] {
            let (gu, wu) = restricted_gap(&g, &d, r, GapTarget::Uniform, None);
            let (gd, wd) = restricted_gap(&g, &d, r, GapTarget::Degree, None);
            assert_close(gd, gu, 1e-12);
            assert_eq!(wu, wd);
        }
    }

    #[test]
    fn beta_one_reduces_to_mixing_time() {
        let params = MixParams::new(1.0, DEFAULT_EPS).unwrap();
        for g in [complete(16).unwrap(), cycle(9).unwrap(), barbell(2, 8).unwrap()] {
            let res = local_mixing_oracle(
                &g,
                0,
                &params,
                OracleMode::Definition { contain_source: false },
            )
            .unwrap();
            assert_eq!(res.tau, mixing_time(&g, 0, DEFAULT_EPS, false).unwrap());
            assert_eq!(res.set_size, g.node_count());
        }
    }

    #[test]
    fn complete_graph_local_mixing_is_one() {
        let g = complete(16).unwrap();
        let params = MixParams::new(4.0, DEFAULT_EPS).unwrap();
        let res = local_mixing_oracle(
            &g,
            0,
            &params,
            OracleMode::Definition { contain_source: false },
        )
        .unwrap();
        assert_eq!(res.tau, 1);
    }

    #[test]
    fn validate_condition_reports_tau_phi() {
        let g = barbell(2, 4).unwrap();
        let params = MixParams::new(2.0, DEFAULT_EPS).unwrap();
        let res = local_mixing_oracle(
            &g,
            0,
            &params,
            OracleMode::Definition { contain_source: false },
        )
        .unwrap();
        if res.set_size < g.node_count() {
            let value = validate_condition(&g, &res).unwrap();
            let phi = g.conductance(&res.witness).unwrap().to_f64();
            assert_close(value, res.tau as f64 * phi, 1e-15);
        }
    }

    #[test]
    fn path_from_an_endpoint_violates_the_condition() {
        // at this accuracy a diffusing profile only flattens once it covers
        // the whole path, so the witness degenerates to the full set; any
        // proper prefix witness would carry a huge tau * phi
        let g = crate::graph::path(33).unwrap();
        let params = MixParams::new(2.0, DEFAULT_EPS).unwrap().lazy();
        let res = local_mixing_oracle(
            &g,
            0,
            &params,
            OracleMode::Definition { contain_source: false },
        )
        .unwrap();
        assert_eq!(res.set_size, g.node_count());
        assert_eq!(validate_condition(&g, &res), Err(Error::EmptyOrFullSubset));

        let half = LocalMixOracleResult {
            witness: NodeSubset::new(&g, 0..17).unwrap(),
            set_size: 17,
            ..res
        };
        assert!(validate_condition(&g, &half).unwrap() > 10.0);
    }
}
