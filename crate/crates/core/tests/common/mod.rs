//! Random instance corpus and a from-scratch SINR oracle that reads only
//! coordinates, links and parameters.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sinrsched::instances::{gen_random_euclidean, RandomSpec};
use sinrsched::{Directionality, Instance, LinkId, Metric, PowerAssignment, SinrParams};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerKind {
    Uniform,
    Linear,
    /// `P = len^(alpha/2)`.
    Mean,
}

/// A random planar instance dense enough that interference matters.
pub fn random_instance(r: &mut ChaCha8Rng, n: usize, power: PowerKind, noisy: bool, dir: Directionality) -> Instance {
    let alpha = *[2.0, 2.5, 3.0, 4.0].choose(r).unwrap();
    let beta = *[1.0, 1.5, 2.0].choose(r).unwrap();
    let max_len: f64 = 6.0;
    let noise = if !noisy {
        0.0
    } else {
        match power {
            PowerKind::Uniform => 0.3 / (beta * max_len.powf(alpha)),
            PowerKind::Linear => 0.3 / beta,
            PowerKind::Mean => 0.3 / (beta * max_len.powf(alpha / 2.0)),
        }
    };
    let params = SinrParams::new(alpha, beta, noise).unwrap();
    let spec = RandomSpec {
        n,
        area_side: r.gen_range(15.0..40.0),
        min_len: 1.0,
        max_len,
        params,
        power: match power {
            PowerKind::Linear => PowerAssignment::Linear(1.0),
            _ => PowerAssignment::Uniform(1.0),
        },
        directionality: dir,
        seed: r.gen(),
    };
    let inst = gen_random_euclidean(&spec).unwrap();
    if power != PowerKind::Mean {
        return inst;
    }
    let table: BTreeMap<LinkId, f64> =
        inst.derived_all().iter().map(|d| (d.link, d.length.powf(alpha / 2.0))).collect();
    Instance::new(inst.metric().clone(), inst.links().to_vec(), params, PowerAssignment::Table(table), dir).unwrap()
}

/// Mixed corpus over power kinds, noise and directionality.
pub fn corpus(count: usize, max_n: usize, seed: u64) -> Vec<Instance> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let n = r.gen_range(2..=max_n);
            let power = [PowerKind::Uniform, PowerKind::Linear, PowerKind::Mean][i % 3];
            let noisy = (i / 3) % 2 == 1;
            let dir = if (i / 6) % 2 == 1 { Directionality::Bidirectional } else { Directionality::Unidirectional };
            random_instance(&mut r, n, power, noisy, dir)
        })
        .collect()
}

pub fn random_subset(r: &mut ChaCha8Rng, n: usize) -> Vec<LinkId> {
    let p = r.gen_range(0.2..1.0);
    (0..n).filter(|_| r.gen_bool(p)).collect()
}

/// Independent evaluation of the physical model.
pub struct Oracle {
    alpha: f64,
    beta: f64,
    noise: f64,
    bi: bool,
    send: Vec<Vec<f64>>,
    recv: Vec<Vec<f64>>,
    power: Vec<f64>,
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

impl Oracle {
    pub fn new(inst: &Instance) -> Self {
        let Metric::Euclidean(m) = inst.metric() else { panic!("oracle needs coordinates") };
        let p = inst.params();
        let send: Vec<Vec<f64>> = inst.links().iter().map(|l| m.points()[&l.sender].clone()).collect();
        let recv: Vec<Vec<f64>> = inst.links().iter().map(|l| m.points()[&l.receiver].clone()).collect();
        let power = (0..send.len())
            .map(|v| {
                let len = euclid(&send[v], &recv[v]);
                match inst.power() {
                    PowerAssignment::Uniform(x) => *x,
                    PowerAssignment::Linear(k) => k * len.powf(p.alpha),
                    PowerAssignment::Table(t) => t[&v],
                }
            })
            .collect();
        Self {
            alpha: p.alpha,
            beta: p.beta,
            noise: p.noise,
            bi: inst.directionality() == Directionality::Bidirectional,
            send,
            recv,
            power,
        }
    }

    pub fn len(&self, v: LinkId) -> f64 {
        euclid(&self.send[v], &self.recv[v])
    }

    /// `d_wv`: as seen at `v`'s receiver.
    pub fn dist(&self, w: LinkId, v: LinkId) -> f64 {
        let d = euclid(&self.send[w], &self.recv[v]);
        if !self.bi {
            return d;
        }
        d.min(euclid(&self.send[v], &self.recv[w]))
            .min(euclid(&self.send[w], &self.send[v]))
            .min(euclid(&self.recv[w], &self.recv[v]))
    }

    pub fn sinr(&self, v: LinkId, set: &[LinkId]) -> f64 {
        let signal = self.power[v] / self.len(v).powf(self.alpha);
        let interference: f64 =
            set.iter().filter(|&&w| w != v).map(|&w| self.power[w] / self.dist(w, v).powf(self.alpha)).sum();
        signal / (interference + self.noise)
    }

    pub fn affectance(&self, w: LinkId, v: LinkId) -> f64 {
        if w == v {
            return 0.0;
        }
        let lv = self.len(v);
        let c = self.beta / (1.0 - self.beta * self.noise * lv.powf(self.alpha) / self.power[v]);
        c * (self.power[w] / self.power[v]) * (lv / self.dist(w, v)).powf(self.alpha)
    }

    pub fn feasible(&self, set: &[LinkId]) -> bool {
        set.iter().all(|&v| self.sinr(v, set) >= self.beta)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Every feasible set reachable cheaply from an instance: slots of the exact
/// and first-fit schedules plus feasible random subsets.
pub fn feasible_sets(inst: &Instance, r: &mut ChaCha8Rng, draws: usize) -> Vec<Vec<LinkId>> {
    use sinrsched::affectance::is_feasible;
    use sinrsched::measures::{schedule_first_fit, scheduling_number_exact, SCHEDULE_EXACT_LIMIT};
    let mut out: Vec<Vec<LinkId>> = schedule_first_fit(inst).slots;
    if inst.len() <= SCHEDULE_EXACT_LIMIT {
        out.extend(scheduling_number_exact(inst).unwrap().1.slots);
    }
    for _ in 0..draws {
        let s = random_subset(r, inst.len());
        if !s.is_empty() && is_feasible(inst, &s).unwrap() {
            out.push(s);
        }
    }
    out
}
