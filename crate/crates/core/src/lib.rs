//! Random-walk mixing and local mixing times on undirected graphs.
//!
//! Three layers, validated against one another:
//!
//! * centralized oracles ([`walk`], [`exact`]) computing walk distributions,
//!   mixing times, and local mixing times straight from the definitions;
//! * a round-accurate CONGEST-model simulator ([`congest`]) with fixed-point
//!   message encoding, BFS/broadcast/convergecast primitives, and distributed
//!   selection, driving the doubling-length and unit-length local-mixing
//!   algorithms ([`local_mixing`]);
//! * a synchronous push-pull gossip simulator ([`gossip`]) with a
//!   partial-spreading checker.

pub mod congest;
pub mod error;
pub mod exact;
pub mod gossip;
pub mod graph;
pub mod local_mixing;
pub mod walk;

pub use congest::bfs::{broadcast, build_bfs, converge_sum, extend_bfs, BfsTree};
pub use congest::estimate::{
    replay_rw_probability, replay_step, simulate_rw_probability, simulate_step, EstimateOptions,
    RegularityPolicy,
};
pub use congest::fixed::{
    check_capacity, grid_unit, round_to_grid, FixedDist, GridValue, DEFAULT_DENOM_EXPONENT,
};
pub use congest::ledger::{Phase, PhaseCounter, RoundLedger};
pub use congest::select::{select_sum_smallest, OutsideKeys, Selection};
pub use error::{Error, Result};
pub use gossip::{
    check_partial, push_pull_round, push_pull_round_with_choices, run_spreading,
    success_fraction, CoverageRow, GossipState, SpreadReport,
};
pub use graph::{
    barbell, complete, cycle, generate, path, random_regular, Graph, GraphKind, NodeSubset, Ratio,
};
pub use local_mixing::{
    approx_local_mixing, exact_local_mixing, make_grid, AlgoMode, LocalMixParams,
    LocalMixingResult, SetSizeGrid,
};
pub use walk::{
    l1_to_stationary, local_mixing_oracle, mixing_time, restricted_gap, step, step_cap,
    validate_condition, Dist, GapTarget, LengthSchedule, LocalMixOracleResult, MixParams,
    OracleMode, DEFAULT_EPS,
};
