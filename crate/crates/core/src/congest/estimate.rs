//! Deterministic flooding of walk probabilities in fixed point.
//!
//! Per round, every node holding nonzero mass sends its value split by its
//! degree to each neighbor as an exact fraction (the integer numerator
//! travels; the denominator is implied). Receivers sum the incoming fractions
//! exactly and only then round the total to the `1/n^c` grid, so each node
//! accrues at most half a grid step of error per round.

use super::fixed::{nint_div, FixedDist};
use super::ledger::{Phase, RoundLedger};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Whether the simulator insists on a regular graph. The fixed-point message
/// scheme is defined for any degrees (each sender's fraction is exact), and
/// near-regular graphs such as clique chains are the interesting benchmarks,
/// so strictness is the caller's choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RegularityPolicy {
    #[default]
    Strict,
    AllowIrregular,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EstimateOptions {
    pub lazy: bool,
    pub policy: RegularityPolicy,
}

impl EstimateOptions {
    pub fn lazy(mut self) -> Self {
        self.lazy = true;
        self
    }

    pub fn allow_irregular(mut self) -> Self {
        self.policy = RegularityPolicy::AllowIrregular;
        self
    }
}

pub(crate) fn validate_graph(g: &Graph, policy: RegularityPolicy) -> Result<()> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if policy == RegularityPolicy::Strict && g.is_regular().is_none() {
        return Err(Error::NotRegular);
    }
    Ok(())
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Least common multiple of all degrees: the common denominator under which
/// incoming fractions are summed exactly. Equals `d` on a regular graph.
fn degree_lcm(g: &Graph) -> Result<u128> {
    let mut lcm: u128 = 1;
    for u in 0..g.node_count() {
        let d = g.degree(u) as u128;
        lcm = (lcm / gcd(lcm, d))
            .checked_mul(d)
            .ok_or_else(|| Error::Overflow("degree lcm exceeds 128 bits".into()))?;
    }
    Ok(lcm)
}

/// One synchronous round: senders deliver numerators into per-node inboxes,
/// each receiver sums its inbox exactly and rounds once.
fn flood_round(
    g: &Graph,
    w: &FixedDist,
    lcm: u128,
    lazy: bool,
    ledger: Option<&mut RoundLedger>,
) -> Result<FixedDist> {
    let n = g.node_count();
    let mut inbox: Vec<Vec<(usize, u128)>> = vec![Vec::new(); n];
    let mut messages = 0u64;
    for u in 0..n {
        let raw = w.raw()[u];
        if raw > 0 {
            for &v in g.neighbors(u) {
                inbox[v].push((u, raw));
            }
            messages += g.degree(u) as u64;
        }
    }
    let mut next = vec![0u128; n];
    for v in 0..n {
        // sum of raw_s / d(s) over senders, expressed over the lcm denominator
        let mut numer: u128 = 0;
        for &(sender, raw) in &inbox[v] {
            let term = raw
                .checked_mul(lcm / g.degree(sender) as u128)
                .ok_or_else(|| Error::Overflow("message term exceeds 128 bits".into()))?;
            numer = numer
                .checked_add(term)
                .ok_or_else(|| Error::Overflow("inbox sum exceeds 128 bits".into()))?;
        }
        next[v] = if lazy {
            let own = w.raw()[v]
                .checked_mul(lcm)
                .ok_or_else(|| Error::Overflow("lazy term exceeds 128 bits".into()))?;
            nint_div(own + numer, 2 * lcm)?
        } else {
            nint_div(numer, lcm)?
        };
    }
    if let Some(ledger) = ledger {
        ledger.add_rounds(Phase::Flooding, 1);
        ledger.add_messages(Phase::Flooding, messages);
        for row in &inbox {
            for &(_, raw) in row {
                ledger.note_payload(raw);
            }
        }
    }
    Ok(FixedDist::from_raw(next, w.c(), w.step() + 1))
}

/// Advances the simulated distribution by one round, charging the ledger.
pub fn simulate_step(
    g: &Graph,
    w: &FixedDist,
    opts: EstimateOptions,
    ledger: &mut RoundLedger,
) -> Result<FixedDist> {
    let lcm = degree_lcm(g)?;
    flood_round(g, w, lcm, opts.lazy, Some(ledger))
}

/// Runs the full `len`-round estimate from a point mass at `source`,
/// returning the fixed-point distribution each node would output.
pub fn simulate_rw_probability(
    g: &Graph,
    source: usize,
    len: u64,
    c: u32,
    opts: EstimateOptions,
    ledger: &mut RoundLedger,
) -> Result<FixedDist> {
    validate_graph(g, opts.policy)?;
    let lcm = degree_lcm(g)?;
    let mut w = FixedDist::delta(g, source, c)?;
    for _ in 0..len {
        w = flood_round(g, &w, lcm, opts.lazy, Some(ledger))?;
    }
    Ok(w)
}

/// One step of the identical recurrence, computed without message passing.
pub fn replay_step(g: &Graph, w: &FixedDist, opts: EstimateOptions) -> Result<FixedDist> {
    let lcm = degree_lcm(g)?;
    let n = g.node_count();
    let mut next = vec![0u128; n];
    for u in 0..n {
        let mut numer: u128 = 0;
        for &v in g.neighbors(u) {
            let term = w.raw()[v]
                .checked_mul(lcm / g.degree(v) as u128)
                .ok_or_else(|| Error::Overflow("replay term exceeds 128 bits".into()))?;
            numer = numer
                .checked_add(term)
                .ok_or_else(|| Error::Overflow("replay sum exceeds 128 bits".into()))?;
        }
        next[u] = if opts.lazy {
            let own = w.raw()[u]
                .checked_mul(lcm)
                .ok_or_else(|| Error::Overflow("replay lazy term exceeds 128 bits".into()))?;
            nint_div(own + numer, 2 * lcm)?
        } else {
            nint_div(numer, lcm)?
        };
    }
    Ok(FixedDist::from_raw(next, w.c(), w.step() + 1))
}

/// Bit-exact centralized reference for [`simulate_rw_probability`].
pub fn replay_rw_probability(
    g: &Graph,
    source: usize,
    len: u64,
    c: u32,
    opts: EstimateOptions,
) -> Result<FixedDist> {
    validate_graph(g, opts.policy)?;
    let mut w = FixedDist::delta(g, source, c)?;
    for _ in 0..len {
        w = replay_step(g, &w, opts)?;
    }
    Ok(w)
}
