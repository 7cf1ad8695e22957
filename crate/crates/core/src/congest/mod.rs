//! Round-accurate simulator of the synchronous CONGEST model: fixed-point
//! message values on the `1/n^c` grid, per-round flooding of walk
//! probabilities, BFS-tree construction, broadcast/convergecast, and
//! distributed selection of the sum of the `R` smallest keys.
//!
//! Every primitive charges its rounds and messages to a [`ledger::RoundLedger`]
//! and records the widest message payload it sent, so round-complexity and
//! message-size claims are checkable per run.

pub mod bfs;
pub mod estimate;
pub mod fixed;
pub mod ledger;
pub mod select;
