use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{Directionality, Instance, Link, PowerAssignment, SinrParams};
use crate::metric::{EuclideanMetric, Metric, NodeId};

const MAX_REJECTIONS: usize = 10_000;

/// Parameters for a random planar instance.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomSpec {
    pub n: usize,
    pub area_side: f64,
    pub min_len: f64,
    pub max_len: f64,
    pub params: SinrParams,
    pub power: PowerAssignment,
    pub directionality: Directionality,
    pub seed: u64,
}

impl RandomSpec {
    pub fn new(n: usize, params: SinrParams, power: PowerAssignment, seed: u64) -> Self {
        Self {
            n,
            area_side: 100.0,
            min_len: 1.0,
            max_len: 10.0,
            params,
            power,
            directionality: Directionality::Unidirectional,
            seed,
        }
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Senders uniform in the square, receivers at a uniform direction and a
/// uniform length from their sender. Candidates that would violate the
/// instance invariants are redrawn.
pub fn gen_random_euclidean(spec: &RandomSpec) -> Result<Instance> {
    let RandomSpec { n, area_side, min_len, max_len, ref params, ref power, directionality, seed } = *spec;
    if n < 1 {
        return Err(Error::BadParams("random instance needs n >= 1".into()));
    }
    if !(min_len > 0.0 && min_len <= max_len && max_len < area_side) {
        return Err(Error::BadParams(format!(
            "need 0 < min_len <= max_len < area_side, got {min_len}, {max_len}, {area_side}"
        )));
    }
    params.validate()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ends: Vec<([f64; 2], [f64; 2])> = Vec::with_capacity(n);
    let mut rejections = 0;
    while ends.len() < n {
        let s = [rng.gen_range(0.0..area_side), rng.gen_range(0.0..area_side)];
        let theta = rng.gen_range(0.0..TAU);
        let len = if min_len == max_len { min_len } else { rng.gen_range(min_len..max_len) };
        let r = [s[0] + len * theta.cos(), s[1] + len * theta.sin()];

        let id = ends.len();
        let viable = dist(s, r) > 0.0
            && match power.power_of(id, dist(s, r), params.alpha) {
                Ok(p) => p > params.beta * params.noise * dist(s, r).powf(params.alpha),
                Err(_) => false,
            };
        let separated = ends.iter().all(|&(os, or)| {
            let uni = dist(s, or) > 0.0 && dist(os, r) > 0.0;
            match directionality {
                Directionality::Unidirectional => uni,
                Directionality::Bidirectional => uni && dist(s, os) > 0.0 && dist(r, or) > 0.0,
            }
        });
        if viable && separated {
            ends.push((s, r));
        } else {
            rejections += 1;
            if rejections > MAX_REJECTIONS {
                return Err(Error::GenerationFailed(format!(
                    "gave up after {MAX_REJECTIONS} rejected links ({} of {n} placed)",
                    ends.len()
                )));
            }
        }
    }

    let mut points = BTreeMap::new();
    let mut links = Vec::with_capacity(n);
    for (id, (s, r)) in ends.into_iter().enumerate() {
        let (sid, rid) = (NodeId(2 * id as u32), NodeId(2 * id as u32 + 1));
        points.insert(sid, s.to_vec());
        points.insert(rid, r.to_vec());
        links.push(Link::new(id, sid, rid));
    }
    Instance::new(Metric::Euclidean(EuclideanMetric::new(2, points)?), links, *params, power.clone(), directionality)
}
