//! Shared fixtures for the benchmark targets.

use locmix_core::{barbell, complete, cycle, random_regular, Graph};

pub fn clique_chain() -> Graph {
    barbell(4, 32).unwrap()
}

pub fn big_cycle() -> Graph {
    cycle(129).unwrap()
}

pub fn expander() -> Graph {
    random_regular(64, 6, 7).unwrap()
}

pub fn clique() -> Graph {
    complete(64).unwrap()
}

/// Deterministic key sets for selection benchmarks.
pub fn grid_keys(n: usize, unit: u128, seed: u64) -> Vec<u128> {
    let mut state = seed;
    (0..n)
        .map(|_| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state as u128) % (2 * unit)
        })
        .collect()
}
