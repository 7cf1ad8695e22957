//! Property suites for the centralized walk oracles.

use locmix_core::{
    barbell, complete, cycle, l1_to_stationary, local_mixing_oracle, mixing_time, random_regular,
    restricted_gap, step, Dist, GapTarget, Graph, MixParams, OracleMode, DEFAULT_EPS,
};
use proptest::prelude::*;

fn test_graphs() -> Vec<Graph> {
    vec![
        complete(8).unwrap(),
        cycle(9).unwrap(),
        barbell(2, 8).unwrap(),
        random_regular(32, 4, 7).unwrap(),
    ]
}

#[test]
fn l1_distance_to_stationarity_never_increases() {
    for g in test_graphs() {
        let mut d = Dist::delta(&g, 0).unwrap();
        let mut last = l1_to_stationary(&g, &d);
        for t in 1..=200 {
            d = step(&g, &d, false);
            let now = l1_to_stationary(&g, &d);
            assert!(
                now <= last + 1e-12,
                "n={} t={t}: {now} > {last}",
                g.node_count()
            );
            last = now;
        }
    }
}

#[test]
fn mass_is_conserved_for_ten_thousand_steps() {
    let g = barbell(2, 8).unwrap();
    let mut d = Dist::delta(&g, 0).unwrap();
    for t in 1..=10_000u64 {
        d = step(&g, &d, t % 2 == 0);
        assert!(
            (d.total_mass() - 1.0).abs() <= 1e-12,
            "t={t}: mass {}",
            d.total_mass()
        );
    }
}

#[test]
fn local_mixing_never_exceeds_mixing_time() {
    for g in test_graphs() {
        if g.is_bipartite() {
            continue;
        }
        let tau_mix = mixing_time(&g, 0, DEFAULT_EPS, false).unwrap();
        for beta in [1.0, 2.0, 4.0] {
            let params = MixParams::new(beta, DEFAULT_EPS).unwrap();
            let res = local_mixing_oracle(
                &g,
                0,
                &params,
                OracleMode::Definition { contain_source: false },
            )
            .unwrap();
            assert!(res.tau <= tau_mix, "beta={beta}: {} > {tau_mix}", res.tau);
        }
    }
}

#[test]
fn local_mixing_is_monotone_in_beta() {
    for g in [cycle(17).unwrap(), barbell(4, 8).unwrap()] {
        let mut last = 0u64;
        for beta in [8.0, 4.0, 2.0, 1.0] {
            // decreasing beta shrinks the admissible set family, so tau grows
            let params = MixParams::new(beta, DEFAULT_EPS).unwrap();
            let res = local_mixing_oracle(
                &g,
                0,
                &params,
                OracleMode::Definition { contain_source: false },
            )
            .unwrap();
            assert!(
                res.tau >= last,
                "beta={beta}: tau {} below predecessor {last}",
                res.tau
            );
            last = res.tau;
        }
    }
}

/// Brute-force minimum of `sum |p(u) - 1/r|` over all size-`r` subsets.
fn brute_force_min(probs: &[f64], r: usize) -> f64 {
    let n = probs.len();
    let target = 1.0 / r as f64;
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != r {
            continue;
        }
        let sum: f64 = (0..n)
            .filter(|&u| mask >> u & 1 == 1)
            .map(|u| (probs[u] - target).abs())
            .sum();
        best = best.min(sum);
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn greedy_selection_matches_brute_force(
        raw in prop::collection::vec(0.0f64..1.0, 4..=10),
        r_frac in 0.0f64..1.0,
    ) {
        let n = raw.len();
        let total: f64 = raw.iter().sum();
        prop_assume!(total > 1e-9);
        let probs: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let r = 1 + ((r_frac * (n - 1) as f64) as usize);
        let g = complete(n).unwrap();
        let d = Dist::from_probs(probs.clone());
        let (gap, witness) = restricted_gap(&g, &d, r, GapTarget::Uniform, None);
        let best = brute_force_min(&probs, r);
        prop_assert!((gap - best).abs() <= 1e-12, "greedy {gap} vs brute {best}");
        prop_assert_eq!(witness.len(), r);
    }

    #[test]
    fn doubling_the_set_size_keeps_the_gap_bounded(
        raw in prop::collection::vec(0.01f64..1.0, 16..=48),
        k_frac in 0.0f64..1.0,
        eps_idx in 0usize..3,
    ) {
        // if some intermediate size s1 in (k, (1+eps)k) has greedy gap < eps
        // against 1/s1, the greedy set of size ceil((1+eps)k) has gap < 4 eps
        // against 1/((1+eps)k)
        let eps: f64 = [0.1, 0.25, 0.5][eps_idx];
        let n = raw.len();
        let total: f64 = raw.iter().sum();
        let probs: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let k_min = (1.0 / eps).floor() as usize + 1;
        let k_max = ((n as f64 - 1.0) / (1.0 + eps)).floor() as usize;
        prop_assume!(k_min <= k_max);
        let k = k_min + ((k_frac * (k_max - k_min) as f64) as usize);

        let greedy = |r: usize, target: f64| -> f64 {
            let mut keys: Vec<f64> = probs.iter().map(|p| (p - target).abs()).collect();
            keys.sort_by(|a, b| a.partial_cmp(b).unwrap());
            keys[..r].iter().sum()
        };

        let m = ((1.0 + eps) * k as f64).ceil() as usize;
        let mut s1 = k + 1;
        while (s1 as f64) < (1.0 + eps) * k as f64 {
            let g1 = greedy(s1, 1.0 / s1 as f64);
            if g1 < eps {
                let g2 = greedy(m, 1.0 / ((1.0 + eps) * k as f64));
                prop_assert!(
                    g2 < 4.0 * eps,
                    "eps={eps} k={k} s1={s1}: g1={g1} but g2={g2}"
                );
            }
            s1 += 1;
        }
    }
}
