//! Round and message accounting, broken down by phase.

use serde::Serialize;

/// Rounds and messages charged to one phase.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PhaseCounter {
    pub rounds: u64,
    pub messages: u64,
}

/// Which phase a primitive charges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Bfs,
    Flooding,
    Selection,
}

/// Cumulative accounting for one simulation run. Totals are derived from the
/// phase counters, so `rounds() == bfs + flooding + selection` by
/// construction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct RoundLedger {
    pub bfs: PhaseCounter,
    pub flooding: PhaseCounter,
    pub selection: PhaseCounter,
    /// Widest message payload sent so far, in bits.
    pub max_message_bits: u32,
}

impl RoundLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rounds(&self) -> u64 {
        self.bfs.rounds + self.flooding.rounds + self.selection.rounds
    }

    pub fn messages(&self) -> u64 {
        self.bfs.messages + self.flooding.messages + self.selection.messages
    }

    fn phase_mut(&mut self, phase: Phase) -> &mut PhaseCounter {
        match phase {
            Phase::Bfs => &mut self.bfs,
            Phase::Flooding => &mut self.flooding,
            Phase::Selection => &mut self.selection,
        }
    }

    pub(crate) fn add_rounds(&mut self, phase: Phase, rounds: u64) {
        self.phase_mut(phase).rounds += rounds;
    }

    pub(crate) fn add_messages(&mut self, phase: Phase, messages: u64) {
        self.phase_mut(phase).messages += messages;
    }

    /// Records one sent payload; keeps the maximum bit width seen.
    pub(crate) fn note_payload(&mut self, value: u128) {
        self.max_message_bits = self.max_message_bits.max(bit_width(value));
    }
}

/// Bits needed to encode `value` (0 for 0).
pub(crate) fn bit_width(value: u128) -> u32 {
    128 - value.leading_zeros()
}
