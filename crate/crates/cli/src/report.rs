//! JSON report shapes. Reports deliberately contain only values that are
//! reproducible from (graph, parameters, seed), so repeated runs produce
//! byte-identical files; wall-clock timing goes to stderr instead.

use serde::Serialize;

use locmix_core::{Graph, GridValue, PhaseCounter, RoundLedger, SpreadReport};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct GraphSummary {
    pub n: usize,
    pub m: usize,
    /// `null` for irregular graphs.
    pub regular_degree: Option<usize>,
    pub diameter: usize,
}

pub fn graph_summary(g: &Graph) -> GraphSummary {
    GraphSummary {
        n: g.node_count(),
        m: g.edge_count(),
        regular_degree: g.is_regular(),
        diameter: g.diameter().unwrap_or(0),
    }
}

#[derive(Serialize)]
pub struct RunReport<P: Serialize, R: Serialize> {
    pub schema: u32,
    pub command: String,
    pub graph: GraphSummary,
    pub params: P,
    pub result: R,
}

#[derive(Serialize)]
pub struct PerSource<R: Serialize> {
    pub source: usize,
    pub run: R,
}

/// Per-source runs plus the graph-wide maximum (the graph's mixing or local
/// mixing time is the max over sources).
#[derive(Serialize)]
pub struct MultiSourceResult<R: Serialize> {
    pub per_source: Vec<PerSource<R>>,
    pub max_value: u64,
    pub max_source: usize,
}

impl<R: Serialize> MultiSourceResult<R> {
    pub fn new(runs: Vec<(usize, R)>, value: impl Fn(&R) -> u64) -> Self {
        let (max_source, max_value) = runs
            .iter()
            .map(|(s, r)| (*s, value(r)))
            .max_by_key(|&(s, v)| (v, std::cmp::Reverse(s)))
            .expect("at least one source");
        MultiSourceResult {
            per_source: runs.into_iter().map(|(source, run)| PerSource { source, run }).collect(),
            max_value,
            max_source,
        }
    }
}

#[derive(Serialize)]
pub struct MixRun {
    pub tau: u64,
}

#[derive(Serialize)]
pub struct OracleRun {
    pub tau: u64,
    pub set_size: usize,
    pub gap: f64,
    pub witness: Vec<usize>,
    /// `tau * phi(witness)`; `null` when the witness is the full vertex set.
    pub condition_value: Option<f64>,
}

/// Probability-like value as an exact grid fraction plus a float
/// convenience field.
#[derive(Serialize)]
pub struct GapEcho {
    pub numer: u128,
    pub denom: u128,
    pub value: f64,
}

impl From<GridValue> for GapEcho {
    fn from(v: GridValue) -> Self {
        GapEcho { numer: v.numer, denom: v.denom, value: v.to_f64() }
    }
}

#[derive(Serialize)]
pub struct LedgerEcho {
    pub total_rounds: u64,
    pub total_messages: u64,
    pub max_message_bits: u32,
    pub bfs: PhaseCounter,
    pub flooding: PhaseCounter,
    pub selection: PhaseCounter,
}

impl From<RoundLedger> for LedgerEcho {
    fn from(ledger: RoundLedger) -> Self {
        LedgerEcho {
            total_rounds: ledger.rounds(),
            total_messages: ledger.messages(),
            max_message_bits: ledger.max_message_bits,
            bfs: ledger.bfs,
            flooding: ledger.flooding,
            selection: ledger.selection,
        }
    }
}

#[derive(Serialize)]
pub struct AlgoRun {
    pub ell: u64,
    pub set_size: usize,
    pub gap: GapEcho,
    pub grid: Vec<usize>,
    pub ledger: LedgerEcho,
}

#[derive(Serialize)]
pub struct GossipRunEcho {
    pub seed: u64,
    pub rounds_to_partial: Option<u64>,
    pub rounds_to_full: Option<u64>,
    pub capped: bool,
}

impl From<&SpreadReport> for GossipRunEcho {
    fn from(r: &SpreadReport) -> Self {
        GossipRunEcho {
            seed: r.seed,
            rounds_to_partial: r.rounds_to_partial,
            rounds_to_full: r.rounds_to_full,
            capped: r.capped,
        }
    }
}

#[derive(Serialize)]
pub struct GossipResult {
    pub success_fraction: f64,
    pub median_rounds_to_partial: Option<u64>,
    pub median_rounds_to_full: Option<u64>,
    pub runs: Vec<GossipRunEcho>,
}

pub fn median(values: &mut Vec<u64>) -> Option<u64> {
    if values.is_empty() {
        return None;
    }
    values.sort_unstable();
    Some(values[values.len() / 2])
}
