//! Fixed-point probability values: exact multiples of `1/n^c` held as wide
//! integer numerators. This is the grid that keeps every CONGEST message at
//! `O(c log n)` bits.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Smallest admissible denominator exponent.
pub const MIN_DENOM_EXPONENT: u32 = 6;

/// Default denominator exponent; `1/n^6` resolution suffices because walk
/// lengths stay below `8 n^3`.
pub const DEFAULT_DENOM_EXPONENT: u32 = 6;

/// Numerators must leave headroom in 128 bits.
pub const CAPACITY_BITS: u32 = 120;

/// Rejects `(n, c)` combinations whose numerators could overflow:
/// requires `c >= 6` and `(c+1) * ceil(log2 n) <= 120`.
pub fn check_capacity(n: usize, c: u32) -> Result<()> {
    if c < MIN_DENOM_EXPONENT {
        return Err(Error::InfeasibleParams(format!(
            "denominator exponent c must be >= {MIN_DENOM_EXPONENT}, got {c}"
        )));
    }
    let log2n = usize::BITS - (n.max(2) - 1).leading_zeros(); // ceil(log2 n)
    if (c + 1) * log2n > CAPACITY_BITS {
        return Err(Error::Overflow(format!(
            "(c+1)*ceil(log2 n) = {} exceeds {CAPACITY_BITS} bits for n={n}, c={c}",
            (c + 1) * log2n
        )));
    }
    Ok(())
}

/// `n^c`, the common denominator of the grid.
pub fn grid_unit(n: usize, c: u32) -> u128 {
    (n as u128).pow(c)
}

/// `nint(numer * unit / denom)` with half-way cases rounded half-up.
pub fn round_to_grid(numer: u128, denom: u128, unit: u128) -> Result<u128> {
    let scaled = numer
        .checked_mul(unit)
        .ok_or_else(|| Error::Overflow(format!("{numer} * {unit} exceeds 128 bits")))?;
    nint_div(scaled, denom)
}

/// `nint(numer / denom)`, half-up: `floor((2*numer + denom) / (2*denom))`.
pub(crate) fn nint_div(numer: u128, denom: u128) -> Result<u128> {
    debug_assert!(denom > 0);
    let twice = numer
        .checked_mul(2)
        .and_then(|x| x.checked_add(denom))
        .ok_or_else(|| Error::Overflow(format!("rounding {numer}/{denom} exceeds 128 bits")))?;
    Ok(twice / (2 * denom))
}

/// Exact grid fraction, for reporting values without decimal rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridValue {
    pub numer: u128,
    pub denom: u128,
}

impl GridValue {
    pub fn to_f64(self) -> f64 {
        self.numer as f64 / self.denom as f64
    }
}

/// A walk distribution on the `1/n^c` grid: `value(u) = raw(u) / n^c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedDist {
    raw: Vec<u128>,
    c: u32,
    step: u64,
}

impl FixedDist {
    /// Point mass at `s` (raw value `n^c`).
    pub fn delta(g: &Graph, s: usize, c: u32) -> Result<Self> {
        let n = g.node_count();
        if s >= n {
            return Err(Error::OutOfRange { id: s, n });
        }
        check_capacity(n, c)?;
        let mut raw = vec![0u128; n];
        raw[s] = grid_unit(n, c);
        Ok(FixedDist { raw, c, step: 0 })
    }

    pub(crate) fn from_raw(raw: Vec<u128>, c: u32, step: u64) -> Self {
        FixedDist { raw, c, step }
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn raw(&self) -> &[u128] {
        &self.raw
    }

    pub fn unit(&self) -> u128 {
        grid_unit(self.raw.len(), self.c)
    }

    pub fn value(&self, u: usize) -> f64 {
        self.raw[u] as f64 / self.unit() as f64
    }

    pub fn values(&self) -> Vec<f64> {
        let unit = self.unit() as f64;
        self.raw.iter().map(|&r| r as f64 / unit).collect()
    }

    pub fn total_raw(&self) -> u128 {
        self.raw.iter().sum()
    }
}
