//! Per-link sender state machine. An agent sees only its own counters, its
//! private random stream and the feedback bits handed to it after each
//! slot; it has no access to geometry or to other agents.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Phase lengths shared by every agent: phase `k` transmits with
/// probability `1 / (4 * 2^k)` for `ceil(8 * c3 * ln(n_estimate) / q_k)` slots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSchedule {
    pub c3: f64,
    pub n_estimate: u64,
}

impl PhaseSchedule {
    pub fn probability(&self, phase: u32) -> f64 {
        0.25 * 0.5f64.powi(phase as i32)
    }

    pub fn length(&self, phase: u32) -> u64 {
        (8.0 * self.c3 * (self.n_estimate as f64).ln() / self.probability(phase)).ceil() as u64
    }
}

#[derive(Debug, Clone)]
pub struct LinkAgent {
    schedule: PhaseSchedule,
    phase: u32,
    slot_in_phase: u64,
    done: bool,
    awaiting_ack: bool,
    rng: ChaCha8Rng,
}

impl LinkAgent {
    pub fn new(schedule: PhaseSchedule, stream_seed: u64) -> Self {
        Self {
            schedule,
            phase: 0,
            slot_in_phase: 0,
            done: false,
            awaiting_ack: false,
            rng: ChaCha8Rng::seed_from_u64(stream_seed),
        }
    }

    pub fn phase(&self) -> u32 {
        self.phase
    }

    pub fn slot_in_phase(&self) -> u64 {
        self.slot_in_phase
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    pub fn is_awaiting_ack(&self) -> bool {
        self.awaiting_ack
    }

    /// Current transmission probability.
    pub fn probability(&self) -> f64 {
        self.schedule.probability(self.phase)
    }

    /// Decides whether to send data in this slot and advances the phase
    /// clock. Finished or waiting agents stay silent and keep their clock.
    pub fn decide(&mut self) -> bool {
        if self.done || self.awaiting_ack {
            return false;
        }
        let send = self.rng.gen_bool(self.probability());
        self.slot_in_phase += 1;
        if self.slot_in_phase == self.schedule.length(self.phase) {
            self.phase += 1;
            self.slot_in_phase = 0;
        }
        send
    }

    /// Feedback after a data slot in which this agent transmitted.
    pub fn on_data_result(&mut self, success: bool, needs_ack: bool) {
        if success {
            if needs_ack {
                self.awaiting_ack = true;
            } else {
                self.done = true;
            }
        }
    }

    /// The acknowledgement for the pending packet arrived.
    pub fn on_ack(&mut self) {
        debug_assert!(self.awaiting_ack);
        self.awaiting_ack = false;
        self.done = true;
    }
}
