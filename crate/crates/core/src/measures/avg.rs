use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instance::{Instance, LinkId};

use super::{better, mask_members, AvgMode, MeasureValue, Method};

pub const AVG_EXACT_LIMIT: usize = 20;

/// Average capped incoming affectance within `members`:
/// `(1/|R|) * sum_{u in R} sum_{v in R} a_v(u)`. Zero for the empty set.
pub fn avg_value(inst: &Instance, members: &[LinkId]) -> f64 {
    if members.is_empty() {
        return 0.0;
    }
    let mut total = 0.0;
    for &u in members {
        for &v in members {
            if u != v {
                total += inst.capped_affectance(v, u);
            }
        }
    }
    total / members.len() as f64
}

/// Maximum average affectance over subsets, exactly by enumeration or as a
/// lower bound by greedy peeling.
pub fn max_avg_affectance(inst: &Instance, mode: AvgMode) -> Result<MeasureValue> {
    match mode {
        AvgMode::Exact => exact(inst),
        AvgMode::Peeling => Ok(peeling(inst)),
    }
}

fn exact(inst: &Instance) -> Result<MeasureValue> {
    let n = inst.len();
    if n > AVG_EXACT_LIMIT {
        return Err(Error::TooLarge { what: "exact max average affectance", links: n, limit: AVG_EXACT_LIMIT });
    }
    if n == 0 {
        return Ok(MeasureValue { value: 0.0, method: Method::Exact, witness: vec![] });
    }
    let (value, mask) = (1u64..(1u64 << n))
        .into_par_iter()
        .map_init(Vec::new, |buf, mask| {
            buf.clear();
            buf.extend(mask_members(mask));
            (avg_value(inst, buf), mask)
        })
        .reduce(|| (f64::NEG_INFINITY, u64::MAX), better);
    Ok(MeasureValue { value, method: Method::Exact, witness: mask_members(mask).collect() })
}

/// Repeatedly drops the member with the smallest in+out affectance inside
/// the current set (ties: lowest id) and keeps the best average seen.
fn peeling(inst: &Instance) -> MeasureValue {
    let n = inst.len();
    if n == 0 {
        return MeasureValue { value: 0.0, method: Method::Peeling, witness: vec![] };
    }
    let mut alive = vec![true; n];
    let mut degree: Vec<f64> = (0..n)
        .map(|u| (0..n).filter(|&v| v != u).map(|v| inst.capped_affectance(v, u) + inst.capped_affectance(u, v)).sum())
        .collect();
    // total in-affectance equals half the degree sum
    let mut total: f64 = degree.iter().sum::<f64>() / 2.0;
    let mut best = (total / n as f64, n);
    let mut removal = Vec::with_capacity(n);
    for size in (1..n).rev() {
        let victim = (0..n)
            .filter(|&u| alive[u])
            .min_by(|&a, &b| degree[a].total_cmp(&degree[b]).then(a.cmp(&b)))
            .expect("nonempty");
        alive[victim] = false;
        removal.push(victim);
        total -= degree[victim];
        for v in (0..n).filter(|&v| alive[v]) {
            degree[v] -= inst.capped_affectance(victim, v) + inst.capped_affectance(v, victim);
        }
        let value = total / size as f64;
        if value > best.0 {
            best = (value, size);
        }
    }
    // members alive at the best size, re-evaluated exactly
    let removed = n - best.1;
    let mut witness: Vec<LinkId> = (0..n).filter(|u| !removal[..removed].contains(u)).collect();
    witness.sort_unstable();
    MeasureValue { value: avg_value(inst, &witness), method: Method::Peeling, witness }
}
