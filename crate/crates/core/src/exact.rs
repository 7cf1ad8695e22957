//! Exact-rational walk distributions. Denominators grow like `d^t`, so this
//! is meant for small certifications (n <= 16, t <= 64), where it removes all
//! floating-point ambiguity from error-bound checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::Result;
use crate::graph::Graph;

/// Walk distribution with exact rational entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactDist {
    probs: Vec<BigRational>,
    step: u64,
}

impl ExactDist {
    pub fn delta(g: &Graph, s: usize) -> Result<Self> {
        let n = g.node_count();
        if s >= n {
            return Err(crate::error::Error::OutOfRange { id: s, n });
        }
        let mut probs = vec![BigRational::zero(); n];
        probs[s] = BigRational::one();
        Ok(ExactDist { probs, step: 0 })
    }

    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    pub fn prob(&self, u: usize) -> &BigRational {
        &self.probs[u]
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn total_mass(&self) -> BigRational {
        self.probs.iter().sum()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.probs.iter().map(|p| p.to_f64().unwrap()).collect()
    }
}

/// One exact application of the walk operator.
pub fn step(g: &Graph, d: &ExactDist, lazy: bool) -> ExactDist {
    let n = g.node_count();
    let mut next = vec![BigRational::zero(); n];
    for v in 0..n {
        if !d.probs[v].is_zero() {
            let share = &d.probs[v] / BigRational::from(BigInt::from(g.degree(v)));
            for &u in g.neighbors(v) {
                next[u] += &share;
            }
        }
    }
    if lazy {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        for u in 0..n {
            next[u] = &half * &next[u] + &half * &d.probs[u];
        }
    }
    ExactDist { probs: next, step: d.step + 1 }
}
