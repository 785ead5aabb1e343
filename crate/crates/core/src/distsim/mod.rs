//! Slot-synchronous simulation of the randomized backoff protocol: every
//! unfinished sender transmits with probability `1 / (4 * 2^k)` in phase `k`
//! and stops once it learns its packet got through.

pub mod agent;
mod trace;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::affectance::{incoming_uncapped_unchecked, TOL};
use crate::dual::dual_instance;
use crate::error::{Error, Result};
use crate::instance::{Directionality, Instance, LinkId};

pub use agent::{LinkAgent, PhaseSchedule};
pub use trace::{active_gadget_curve, gadget_survival, LinkOutcome, SimTrace, SlotKind, SlotRecord, SurvivalCounts};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AckModel {
    /// Senders learn of success at no cost.
    FreeAck,
    /// Odd slots carry data, even slots carry acknowledgements sent by the
    /// receivers over the dual instance.
    ExplicitAck,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub c3: f64,
    pub n_estimate: u64,
    pub max_slots: u64,
    pub ack_model: AckModel,
    pub seed: u64,
}

pub const DEFAULT_MAX_SLOTS: u64 = 1_000_000;

impl SimConfig {
    /// Defaults for `inst`: `c3 = 1`, the exact link count (at least 2) as
    /// size estimate, free acknowledgements.
    pub fn for_instance(inst: &Instance, seed: u64) -> Self {
        Self {
            c3: 1.0,
            n_estimate: (inst.len() as u64).max(2),
            max_slots: DEFAULT_MAX_SLOTS,
            ack_model: AckModel::FreeAck,
            seed,
        }
    }

    pub fn schedule(&self) -> PhaseSchedule {
        PhaseSchedule { c3: self.c3, n_estimate: self.n_estimate }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c3.is_finite() && self.c3 > 0.0) {
            return Err(Error::ConfigInvalid(format!("c3 must be positive, got {}", self.c3)));
        }
        if self.n_estimate < 2 {
            return Err(Error::ConfigInvalid(format!("n_estimate must be >= 2, got {}", self.n_estimate)));
        }
        let first = self.schedule().length(0);
        if self.max_slots < first {
            return Err(Error::ConfigInvalid(format!(
                "max_slots {} is shorter than the first phase ({first} slots)",
                self.max_slots
            )));
        }
        Ok(())
    }
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Order-independent seed derivation: hashes a root seed together with a
/// sequence of indices.
pub fn derive_seed(root: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(mix(root), |acc, &p| mix(acc ^ mix(p)))
}

/// Links of `tx` whose uncapped incoming affectance from the rest of `tx`
/// is at most one, i.e. whose SINR clears the threshold.
fn successes(inst: &Instance, tx: &[LinkId]) -> Vec<LinkId> {
    tx.iter().copied().filter(|&v| incoming_uncapped_unchecked(inst, tx, v) <= 1.0 + TOL).collect()
}

pub fn run_distributed(inst: &Instance, cfg: &SimConfig) -> Result<SimTrace> {
    cfg.validate()?;
    let dual = match cfg.ack_model {
        AckModel::FreeAck => None,
        AckModel::ExplicitAck => {
            if inst.directionality() != Directionality::Unidirectional {
                return Err(Error::ConfigInvalid("explicit acknowledgements need a unidirectional instance".into()));
            }
            Some(dual_instance(inst)?)
        }
    };

    let n = inst.len();
    let schedule = cfg.schedule();
    let mut agents: Vec<LinkAgent> =
        (0..n).map(|id| LinkAgent::new(schedule, derive_seed(cfg.seed, &[id as u64]))).collect();
    let mut outcomes = vec![LinkOutcome::default(); n];
    let mut slots = Vec::new();
    let mut remaining = n;
    let mut t = 0;

    while remaining > 0 && t < cfg.max_slots {
        t += 1;
        let ack_slot = dual.is_some() && t % 2 == 0;
        if ack_slot {
            let dual = dual.as_ref().expect("checked above");
            let tx: Vec<LinkId> = (0..n).filter(|&v| agents[v].is_awaiting_ack()).collect();
            let ok = successes(dual, &tx);
            for &v in &ok {
                agents[v].on_ack();
                outcomes[v].ack_slot = Some(t);
                outcomes[v].completion = Some(t);
                remaining -= 1;
            }
            slots.push(SlotRecord { slot: t, kind: SlotKind::Ack, transmitters: tx, successes: ok });
        } else {
            let tx: Vec<LinkId> = (0..n).filter(|&v| agents[v].decide()).collect();
            let ok = successes(inst, &tx);
            let needs_ack = dual.is_some();
            for &v in &ok {
                agents[v].on_data_result(true, needs_ack);
                outcomes[v].data_slot = Some(t);
                if !needs_ack {
                    outcomes[v].completion = Some(t);
                    remaining -= 1;
                }
            }
            slots.push(SlotRecord { slot: t, kind: SlotKind::Data, transmitters: tx, successes: ok });
        }
    }

    let truncated = remaining > 0;
    let mut trace = SimTrace {
        slots,
        links: outcomes,
        completion_slot: if truncated { None } else { Some(t) },
        truncated,
        slots_run: t,
        active_gadgets: None,
    };
    if let Some(g) = inst.gadgets() {
        let curve = active_gadget_curve(&trace, Some(g))?;
        trace.active_gadgets = Some(curve[1..=t as usize].iter().map(|&(_, a)| a).collect());
    }
    Ok(trace)
}

/// Mean number of successes in one slot when every link transmits
/// independently with probability `q`, with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub trials: u64,
}

pub fn per_slot_success_rate(inst: &Instance, q: f64, trials: u64, seed: u64) -> Result<RateEstimate> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::ConfigInvalid(format!("q must lie in [0, 1], got {q}")));
    }
    if trials == 0 {
        return Err(Error::ConfigInvalid("trials must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    let mut tx = Vec::with_capacity(inst.len());
    for _ in 0..trials {
        tx.clear();
        tx.extend(inst.link_ids().filter(|_| rng.gen_bool(q)));
        let k = successes(inst, &tx).len() as f64;
        sum += k;
        sum_sq += k * k;
    }
    let m = trials as f64;
    let mean = sum / m;
    let var = if trials > 1 { ((sum_sq - m * mean * mean) / (m - 1.0)).max(0.0) } else { 0.0 };
    Ok(RateEstimate { mean, std_err: (var / m).sqrt(), trials })
}
