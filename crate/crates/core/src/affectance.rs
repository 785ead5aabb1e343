//! Affectance, SINR and feasibility predicates over link sets.
//!
//! Affectance of `w` on `v` is `c_v * (P_w / P_v) * (len_v / d_wv)^alpha`,
//! zero on the diagonal. Feasibility and delta-signal checks use the
//! uncapped value, which is exactly equivalent to `SINR >= beta`; the
//! measures use the capped form `min(1, .)`.

use crate::error::{Error, Result};
use crate::instance::{Instance, LinkId};

/// Absolute slack on affectance thresholds.
pub const TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cap {
    Capped,
    Uncapped,
}

/// Affectance of link `w` on link `v`.
pub fn affectance(inst: &Instance, w: LinkId, v: LinkId, cap: Cap) -> Result<f64> {
    inst.check_link(w)?;
    inst.check_link(v)?;
    if w == v {
        return Ok(0.0);
    }
    Ok(match cap {
        Cap::Capped => inst.capped_affectance(w, v),
        Cap::Uncapped => inst.raw_affectance(w, v),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffectanceSums {
    /// `a_S(v)`: total affectance from `S` on `v`.
    pub incoming: f64,
    /// `a_v(S)`: total affectance from `v` on `S`.
    pub outgoing: f64,
}

/// Capped in- and out-sums of `v` against `set`.
pub fn affectance_sums(inst: &Instance, set: &[LinkId], v: LinkId) -> Result<AffectanceSums> {
    inst.check_set(set)?;
    inst.check_link(v)?;
    let mut sums = AffectanceSums { incoming: 0.0, outgoing: 0.0 };
    for &w in set {
        if w != v {
            sums.incoming += inst.capped_affectance(w, v);
            sums.outgoing += inst.capped_affectance(v, w);
        }
    }
    Ok(sums)
}

/// `a_R(S)`: capped affectance summed over every sender in `from` and
/// receiver in `onto`.
pub fn set_affectance(inst: &Instance, from: &[LinkId], onto: &[LinkId]) -> Result<f64> {
    inst.check_set(from)?;
    inst.check_set(onto)?;
    Ok(onto.iter().map(|&u| from.iter().filter(|&&v| v != u).map(|&v| inst.capped_affectance(v, u)).sum::<f64>()).sum())
}

/// Uncapped `a_S(v)`.
pub fn incoming_uncapped(inst: &Instance, set: &[LinkId], v: LinkId) -> Result<f64> {
    inst.check_set(set)?;
    inst.check_link(v)?;
    Ok(incoming_uncapped_unchecked(inst, set, v))
}

pub(crate) fn incoming_uncapped_unchecked(inst: &Instance, set: &[LinkId], v: LinkId) -> f64 {
    set.iter().filter(|&&w| w != v).map(|&w| inst.raw_affectance(w, v)).sum()
}

/// Signal-to-interference-plus-noise ratio at `v`'s receiver when exactly
/// the links of `set` transmit. `+inf` when nothing interferes and `N = 0`.
pub fn sinr(inst: &Instance, v: LinkId, set: &[LinkId]) -> Result<f64> {
    inst.check_set(set)?;
    inst.check_link(v)?;
    if !set.contains(&v) {
        return Err(Error::BadParams(format!("link {v} is not in the transmitting set")));
    }
    Ok(sinr_unchecked(inst, v, set))
}

#[inline]
pub(crate) fn sinr_unchecked(inst: &Instance, v: LinkId, set: &[LinkId]) -> f64 {
    let denom: f64 =
        set.iter().filter(|&&w| w != v).map(|&w| inst.interference(w, v)).sum::<f64>() + inst.params().noise;
    if denom == 0.0 {
        f64::INFINITY
    } else {
        inst.signal(v) / denom
    }
}

/// Whether every link in `set` clears the SINR threshold simultaneously.
pub fn is_feasible(inst: &Instance, set: &[LinkId]) -> Result<bool> {
    is_delta_signal(inst, set, 1.0)
}

/// Whether every link in `set` receives uncapped affectance at most `1/delta`.
pub fn is_delta_signal(inst: &Instance, set: &[LinkId], delta: f64) -> Result<bool> {
    if delta.is_nan() || delta < 1.0 {
        return Err(Error::BadParams(format!("delta must be >= 1, got {delta}")));
    }
    inst.check_set(set)?;
    Ok(delta_signal_unchecked(inst, set, delta))
}

pub(crate) fn delta_signal_unchecked(inst: &Instance, set: &[LinkId], delta: f64) -> bool {
    let bound = 1.0 / delta + TOL;
    set.iter().all(|&v| incoming_uncapped_unchecked(inst, set, v) <= bound)
}

/// Greedy first-fit split of a feasible set into delta-signal parts, links
/// taken longest first (ties by id).
pub fn partition_delta_signal(inst: &Instance, set: &[LinkId], delta: f64) -> Result<Vec<Vec<LinkId>>> {
    if !is_feasible(inst, set)? {
        return Err(Error::InfeasibleInput);
    }
    if delta.is_nan() || delta < 1.0 {
        return Err(Error::BadParams(format!("delta must be >= 1, got {delta}")));
    }
    Ok(first_fit(inst, set, 1.0 / delta + TOL))
}

/// Links ordered by decreasing length, ties by increasing id.
pub(crate) fn longest_first(inst: &Instance, set: &[LinkId]) -> Vec<LinkId> {
    let mut order = set.to_vec();
    let d = inst.derived_all();
    order.sort_by(|&a, &b| d[b].length.total_cmp(&d[a].length).then(a.cmp(&b)));
    order
}

/// First-fit packing in longest-first order; each part keeps every member's
/// uncapped incoming affectance at most `bound`.
pub(crate) fn first_fit(inst: &Instance, set: &[LinkId], bound: f64) -> Vec<Vec<LinkId>> {
    // parts[i] = (members, incoming sums aligned with members)
    let mut parts: Vec<(Vec<LinkId>, Vec<f64>)> = Vec::new();
    for w in longest_first(inst, set) {
        let slot = parts.iter().position(|(members, load)| {
            let own: f64 = members.iter().map(|&u| inst.raw_affectance(u, w)).sum();
            own <= bound && members.iter().zip(load).all(|(&u, &l)| l + inst.raw_affectance(w, u) <= bound)
        });
        match slot {
            Some(i) => {
                let (members, load) = &mut parts[i];
                let own: f64 = members.iter().map(|&u| inst.raw_affectance(u, w)).sum();
                for (u, l) in members.iter().zip(load.iter_mut()) {
                    *l += inst.raw_affectance(w, *u);
                }
                members.push(w);
                load.push(own);
            }
            None => parts.push((vec![w], vec![0.0])),
        }
    }
    parts.into_iter().map(|(members, _)| members).collect()
}

/// Members of `set` whose capped outgoing affectance into `set` is at most
/// `bound`.
pub fn low_outgoing(inst: &Instance, set: &[LinkId], bound: f64) -> Result<Vec<LinkId>> {
    inst.check_set(set)?;
    Ok(set
        .iter()
        .copied()
        .filter(|&v| set.iter().filter(|&&w| w != v).map(|&w| inst.capped_affectance(v, w)).sum::<f64>() <= bound + TOL)
        .collect())
}
