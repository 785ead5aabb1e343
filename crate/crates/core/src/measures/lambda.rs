use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instance::{Instance, LinkId};

use super::{better, mask_members, MeasureValue, Method};

pub const LAMBDA_EXACT_LIMIT: usize = 18;

/// Smallest `t` for which at least a quarter of `members` receive capped
/// affectance at most `4t` from within `members`: one quarter of the
/// `ceil(|R|/4)`-th smallest in-sum.
pub fn lambda_value(inst: &Instance, members: &[LinkId]) -> f64 {
    if members.is_empty() {
        return 0.0;
    }
    let mut sums: Vec<f64> = members
        .iter()
        .map(|&u| members.iter().filter(|&&w| w != u).map(|&w| inst.capped_affectance(w, u)).sum())
        .collect();
    let k = members.len().div_ceil(4);
    let (_, kth, _) = sums.select_nth_unstable_by(k - 1, f64::total_cmp);
    *kth / 4.0
}

/// Lambda by enumerating every nonempty subset.
pub fn lambda_exact(inst: &Instance) -> Result<MeasureValue> {
    let n = inst.len();
    if n > LAMBDA_EXACT_LIMIT {
        return Err(Error::TooLarge { what: "exact Lambda", links: n, limit: LAMBDA_EXACT_LIMIT });
    }
    if n == 0 {
        return Ok(MeasureValue { value: 0.0, method: Method::Exact, witness: vec![] });
    }
    let (value, mask) = (1u64..(1u64 << n))
        .into_par_iter()
        .map_init(Vec::new, |buf, mask| {
            buf.clear();
            buf.extend(mask_members(mask));
            (lambda_value(inst, buf), mask)
        })
        .reduce(|| (f64::NEG_INFINITY, u64::MAX), better);
    Ok(MeasureValue { value, method: Method::Exact, witness: mask_members(mask).collect() })
}

/// Lower bound on Lambda from the full set plus `samples` random subsets;
/// each sample keeps every link independently with a probability drawn from
/// {1/4, 1/2, 1}.
pub fn lambda_sampled(inst: &Instance, samples: usize, seed: u64) -> Result<MeasureValue> {
    if samples == 0 {
        return Err(Error::BadParams("lambda sampling needs at least one sample".into()));
    }
    let all: Vec<LinkId> = inst.link_ids().collect();
    let mut best = (lambda_value(inst, &all), all);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut members = Vec::with_capacity(inst.len());
    for _ in 0..samples {
        let p = [0.25, 0.5, 1.0][rng.gen_range(0..3)];
        members.clear();
        members.extend(inst.link_ids().filter(|_| rng.gen::<f64>() < p));
        if members.is_empty() {
            continue;
        }
        let t = lambda_value(inst, &members);
        if t > best.0 {
            best = (t, members.clone());
        }
    }
    Ok(MeasureValue { value: best.0, method: Method::Sampled, witness: best.1 })
}
