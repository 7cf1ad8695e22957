//! Synchronous push-pull information spreading in the LOCAL model.
//!
//! Every node starts with its own token. Per round each node picks one
//! uniformly random neighbor and the pair exchanges full token sets, both
//! unions taken against the round-start snapshot. The partial-spreading
//! checker asks whether every token reached `ceil(n/beta)` nodes and every
//! node collected `ceil(n/beta)` tokens.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Fixed-capacity bit set over token ids.
#[derive(Debug, Clone, PartialEq, Eq)]
struct TokenSet {
    words: Vec<u64>,
}

impl TokenSet {
    fn singleton(n: usize, token: usize) -> Self {
        let mut set = TokenSet { words: vec![0; n.div_ceil(64)] };
        set.insert(token);
        set
    }

    fn insert(&mut self, token: usize) {
        self.words[token / 64] |= 1 << (token % 64);
    }

    fn contains(&self, token: usize) -> bool {
        self.words[token / 64] >> (token % 64) & 1 == 1
    }

    fn union_with(&mut self, other: &TokenSet) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
    }

    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Per-node token sets plus the round counter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GossipState {
    sets: Vec<TokenSet>,
    round: u64,
}

impl GossipState {
    /// Every node holds exactly its own token.
    pub fn fresh(n: usize) -> Self {
        GossipState {
            sets: (0..n).map(|u| TokenSet::singleton(n, u)).collect(),
            round: 0,
        }
    }

    pub fn node_count(&self) -> usize {
        self.sets.len()
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn holds(&self, node: usize, token: usize) -> bool {
        self.sets[node].contains(token)
    }

    pub fn tokens_at(&self, node: usize) -> usize {
        self.sets[node].count()
    }

    pub fn holders_of(&self, token: usize) -> usize {
        (0..self.sets.len()).filter(|&u| self.sets[u].contains(token)).count()
    }

    pub fn min_tokens_per_node(&self) -> usize {
        (0..self.sets.len()).map(|u| self.tokens_at(u)).min().unwrap_or(0)
    }

    pub fn min_holders_per_token(&self) -> usize {
        (0..self.sets.len()).map(|t| self.holders_of(t)).min().unwrap_or(0)
    }

    /// All tokens everywhere.
    pub fn fully_spread(&self) -> bool {
        let n = self.sets.len();
        self.min_tokens_per_node() == n
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Neighbor choice for `node` in `round`, from a stream keyed by
/// `(seed, round, node)` so runs are reproducible and order-independent.
fn choose_neighbor(g: &Graph, seed: u64, round: u64, node: usize) -> usize {
    let key = splitmix64(splitmix64(splitmix64(seed) ^ round) ^ node as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    let nbrs = g.neighbors(node);
    nbrs[rng.random_range(0..nbrs.len())]
}

/// One synchronous round with explicit neighbor choices (`choices[u]` must
/// be a neighbor of `u`); both endpoints of every pairing take the union of
/// the round-start snapshots.
pub fn push_pull_round_with_choices(g: &Graph, state: &mut GossipState, choices: &[usize]) {
    let snapshot = state.sets.clone();
    for u in 0..g.node_count() {
        let v = choices[u];
        debug_assert!(g.has_edge(u, v), "choice {v} is not a neighbor of {u}");
        state.sets[u].union_with(&snapshot[v]);
        state.sets[v].union_with(&snapshot[u]);
    }
    state.round += 1;
}

/// One synchronous push-pull round with seeded uniform neighbor choices.
pub fn push_pull_round(g: &Graph, state: &mut GossipState, seed: u64) {
    let choices: Vec<usize> = (0..g.node_count())
        .map(|u| choose_neighbor(g, seed, state.round, u))
        .collect();
    push_pull_round_with_choices(g, state, &choices);
}

/// Message discipline per exchange.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GossipMode {
    /// Full token sets travel in one round (no congestion).
    #[default]
    Local,
    /// Each edge carries one token id per direction per round; both
    /// endpoints send one uniformly random token they hold.
    Congest,
}

/// One synchronous round under the given message discipline.
pub fn push_pull_round_in_mode(g: &Graph, state: &mut GossipState, seed: u64, mode: GossipMode) {
    if mode == GossipMode::Local {
        return push_pull_round(g, state, seed);
    }
    let n = g.node_count();
    let round = state.round;
    let snapshot = state.sets.clone();
    for u in 0..n {
        let key = splitmix64(splitmix64(splitmix64(seed) ^ round) ^ u as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(key);
        let nbrs = g.neighbors(u);
        let v = nbrs[rng.random_range(0..nbrs.len())];
        // one pushed and one pulled token id, sampled from the snapshots
        let push = sample_token(&snapshot[u], n, &mut rng);
        let pull = sample_token(&snapshot[v], n, &mut rng);
        state.sets[v].insert(push);
        state.sets[u].insert(pull);
    }
    state.round += 1;
}

fn sample_token(set: &TokenSet, n: usize, rng: &mut ChaCha8Rng) -> usize {
    let count = set.count();
    let target = rng.random_range(0..count);
    let mut seen = 0;
    for t in 0..n {
        if set.contains(t) {
            if seen == target {
                return t;
            }
            seen += 1;
        }
    }
    unreachable!("token sets are never empty")
}

/// True when every token is held by at least `ceil(n/beta)` nodes and every
/// node holds at least `ceil(n/beta)` tokens.
pub fn check_partial(state: &GossipState, beta: f64) -> bool {
    let n = state.node_count();
    let k = ((n as f64 / beta).ceil() as usize).max(1);
    state.min_tokens_per_node() >= k && state.min_holders_per_token() >= k
}

/// Per-round coverage snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CoverageRow {
    pub round: u64,
    pub min_tokens_per_node: usize,
    pub min_holders_per_token: usize,
}

/// Outcome of one seeded spreading run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpreadReport {
    pub seed: u64,
    pub beta: f64,
    pub rounds_to_partial: Option<u64>,
    pub rounds_to_full: Option<u64>,
    /// The cap stopped the run before full spreading.
    pub capped: bool,
    pub coverage: Vec<CoverageRow>,
}

/// Runs push-pull from the fresh state until full spreading or `round_cap`,
/// recording coverage per round. Hitting the cap is reported, not an error.
pub fn run_spreading(g: &Graph, beta: f64, seed: u64, round_cap: u64) -> Result<SpreadReport> {
    run_spreading_in_mode(g, beta, seed, round_cap, GossipMode::Local)
}

/// [`run_spreading`] under an explicit message discipline.
pub fn run_spreading_in_mode(
    g: &Graph,
    beta: f64,
    seed: u64,
    round_cap: u64,
    mode: GossipMode,
) -> Result<SpreadReport> {
    if !(beta >= 1.0) {
        return Err(Error::InfeasibleParams(format!("beta must be >= 1, got {beta}")));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut state = GossipState::fresh(g.node_count());
    let mut report = SpreadReport {
        seed,
        beta,
        rounds_to_partial: None,
        rounds_to_full: None,
        capped: false,
        coverage: Vec::new(),
    };
    let observe = |state: &GossipState, report: &mut SpreadReport| {
        report.coverage.push(CoverageRow {
            round: state.round(),
            min_tokens_per_node: state.min_tokens_per_node(),
            min_holders_per_token: state.min_holders_per_token(),
        });
        if report.rounds_to_partial.is_none() && check_partial(state, beta) {
            report.rounds_to_partial = Some(state.round());
        }
        if report.rounds_to_full.is_none() && state.fully_spread() {
            report.rounds_to_full = Some(state.round());
        }
    };
    observe(&state, &mut report);
    while report.rounds_to_full.is_none() && state.round() < round_cap {
        push_pull_round(g, &mut state, seed);
        observe(&state, &mut report);
    }
    report.capped = report.rounds_to_full.is_none();
    Ok(report)
}

/// Fraction of seeds whose run met the partial condition within
/// `round_budget` rounds: the empirical `1 - delta`.
pub fn success_fraction(g: &Graph, beta: f64, round_budget: u64, seeds: &[u64]) -> Result<f64> {
    let mut successes = 0usize;
    for &seed in seeds {
        let report = run_spreading(g, beta, seed, round_budget)?;
        if report.rounds_to_partial.is_some() {
            successes += 1;
        }
    }
    Ok(successes as f64 / seeds.len().max(1) as f64)
}
