use serde::{Deserialize, Serialize};

use crate::affectance::{delta_signal_unchecked, first_fit, TOL};
use crate::error::{Error, Result};
use crate::instance::{Instance, LinkId};

use super::mask_members;

/// Largest instance the subset DP accepts (3^n work).
pub const SCHEDULE_EXACT_LIMIT: usize = 15;

/// An ordered partition of a link set into slots.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub slots: Vec<Vec<LinkId>>,
}

impl Schedule {
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Checks that the slots partition every link of `inst` and that each
    /// slot is feasible.
    pub fn validate(&self, inst: &Instance) -> Result<()> {
        let mut seen = vec![false; inst.len()];
        for slot in &self.slots {
            for &id in slot {
                inst.check_link(id)?;
                if std::mem::replace(&mut seen[id], true) {
                    return Err(Error::BadParams(format!("link {id} scheduled twice")));
                }
            }
            if !delta_signal_unchecked(inst, slot, 1.0) {
                return Err(Error::BadParams(format!("slot {slot:?} is not feasible")));
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::BadParams(format!("link {missing} is not scheduled")));
        }
        Ok(())
    }
}

/// Longest-first first-fit schedule; an upper bound on the scheduling number.
pub fn schedule_first_fit(inst: &Instance) -> Schedule {
    let all: Vec<LinkId> = inst.link_ids().collect();
    Schedule { slots: first_fit(inst, &all, 1.0 + TOL) }
}

/// Feasibility of every subset, indexed by bitmask.
pub(crate) fn feasible_masks(inst: &Instance) -> Vec<bool> {
    let n = inst.len();
    let full = 1usize << n;
    let mut feasible = vec![false; full];
    feasible[0] = true;
    let mut members = Vec::with_capacity(n);
    for mask in 1..full {
        let top = usize::BITS - 1 - mask.leading_zeros();
        // supersets of infeasible sets are infeasible
        if !feasible[mask & !(1 << top)] {
            continue;
        }
        members.clear();
        members.extend(mask_members(mask as u64));
        feasible[mask] = members.iter().all(|&v| {
            members.iter().filter(|&&w| w != v).map(|&w| inst.raw_affectance(w, v)).sum::<f64>() <= 1.0 + TOL
        });
    }
    feasible
}

/// Minimum number of feasible slots, by dynamic programming over subsets.
/// Returns the optimum together with an optimal schedule.
pub fn scheduling_number_exact(inst: &Instance) -> Result<(usize, Schedule)> {
    let n = inst.len();
    if n > SCHEDULE_EXACT_LIMIT {
        return Err(Error::TooLarge { what: "exact scheduling number", links: n, limit: SCHEDULE_EXACT_LIMIT });
    }
    let feasible = feasible_masks(inst);
    let full = (1usize << n) - 1;
    let mut best = vec![u8::MAX; full + 1];
    let mut choice = vec![0usize; full + 1];
    best[0] = 0;
    for mask in 1..=full {
        // the slot holding the lowest member is enumerated exactly once
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        let mut sub = rest;
        loop {
            let part = sub | low;
            if feasible[part] {
                let cand = best[mask ^ part].saturating_add(1);
                if cand < best[mask] {
                    best[mask] = cand;
                    choice[mask] = part;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    let mut slots = Vec::new();
    let mut mask = full;
    while mask != 0 {
        let part = choice[mask];
        slots.push(mask_members(part as u64).collect());
        mask ^= part;
    }
    Ok((best[full] as usize, Schedule { slots }))
}
