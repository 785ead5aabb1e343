//! Links, SINR parameters, power assignments and the validated [`Instance`]
//! every other module consumes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{Metric, NodeId};

/// Links are identified by their position in the instance's link list.
pub type LinkId = usize;

/// Relative tolerance for the length-monotone / sub-linear power checks.
pub const POWER_RATIO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Link {
    pub id: LinkId,
    #[serde(rename = "s")]
    pub sender: NodeId,
    #[serde(rename = "r")]
    pub receiver: NodeId,
}

impl Link {
    pub fn new(id: LinkId, sender: NodeId, receiver: NodeId) -> Self {
        Self { id, sender, receiver }
    }

    pub fn reversed(self) -> Self {
        Self { id: self.id, sender: self.receiver, receiver: self.sender }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SinrParams {
    pub alpha: f64,
    pub beta: f64,
    pub noise: f64,
}

impl SinrParams {
    pub fn new(alpha: f64, beta: f64, noise: f64) -> Result<Self> {
        let p = Self { alpha, beta, noise };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::BadParams(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(self.beta.is_finite() && self.beta >= 1.0) {
            return Err(Error::BadParams(format!("beta must be >= 1, got {}", self.beta)));
        }
        if !(self.noise.is_finite() && self.noise >= 0.0) {
            return Err(Error::BadParams(format!("noise must be >= 0, got {}", self.noise)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PowerAssignment {
    /// Every sender uses the same power.
    Uniform(f64),
    /// `P_v = k * len_v^alpha`.
    Linear(f64),
    Table(BTreeMap<LinkId, f64>),
}

impl PowerAssignment {
    pub(crate) fn power_of(&self, link: LinkId, length: f64, alpha: f64) -> Result<f64> {
        let p = match self {
            PowerAssignment::Uniform(p) => *p,
            PowerAssignment::Linear(k) => k * length.powf(alpha),
            PowerAssignment::Table(t) => {
                *t.get(&link).ok_or_else(|| Error::BadParams(format!("power table has no entry for link {link}")))?
            }
        };
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::BadParams(format!("power of link {link} must be positive, got {p}")));
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Directionality {
    #[serde(rename = "uni")]
    Unidirectional,
    #[serde(rename = "bi")]
    Bidirectional,
}

/// Per-link quantities fixed by the geometry, power and SINR parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedLinkParams {
    pub link: LinkId,
    pub length: f64,
    pub power: f64,
    /// `c_v = beta / (1 - beta * N * len^alpha / P)`.
    pub affectance_constant: f64,
    /// Received signal strength `P / len^alpha`.
    pub signal: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PowerReport {
    pub length_monotone: bool,
    pub sub_linear: bool,
}

/// Distance between two links as seen by `v`'s receiver.
pub fn link_distance_in(metric: &Metric, directionality: Directionality, w: &Link, v: &Link) -> Result<f64> {
    let d = match directionality {
        Directionality::Unidirectional => metric.distance(w.sender, v.receiver)?,
        Directionality::Bidirectional => [
            metric.distance(w.sender, v.receiver)?,
            metric.distance(v.sender, w.receiver)?,
            metric.distance(w.sender, v.sender)?,
            metric.distance(w.receiver, v.receiver)?,
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min),
    };
    if d <= 0.0 {
        return Err(Error::DegenerateDistance(w.id, v.id));
    }
    Ok(d)
}

/// A validated scheduling instance. Immutable after construction; the
/// pairwise quantities used by every hot loop are tabulated up front.
#[derive(Debug, Clone)]
pub struct Instance {
    metric: Metric,
    links: Vec<Link>,
    params: SinrParams,
    power: PowerAssignment,
    directionality: Directionality,
    gadgets: Option<Vec<[LinkId; 2]>>,
    derived: Vec<DerivedLinkParams>,
    // Row-major n x n tables indexed [w * n + v]; diagonals are zero.
    dist: Vec<f64>,
    affect: Vec<f64>,
    interference: Vec<f64>,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.metric == other.metric
            && self.links == other.links
            && self.params == other.params
            && self.power == other.power
            && self.directionality == other.directionality
            && self.gadgets == other.gadgets
    }
}

impl Instance {
    pub fn new(
        metric: Metric,
        links: Vec<Link>,
        params: SinrParams,
        power: PowerAssignment,
        directionality: Directionality,
    ) -> Result<Self> {
        params.validate()?;
        for (i, l) in links.iter().enumerate() {
            if l.id != i {
                return Err(Error::BadParams(format!("link at position {i} has id {}, ids must be 0..n", l.id)));
            }
            for node in [l.sender, l.receiver] {
                if !metric.contains(node) {
                    return Err(Error::UnknownNode(node));
                }
            }
        }
        if let PowerAssignment::Table(t) = &power {
            if let Some(extra) = t.keys().find(|&&id| id >= links.len()) {
                return Err(Error::UnknownLink(*extra));
            }
        }

        let n = links.len();
        let mut derived = Vec::with_capacity(n);
        for l in &links {
            let length = metric.distance(l.sender, l.receiver)?;
            if length <= 0.0 {
                return Err(Error::DegenerateDistance(l.id, l.id));
            }
            let power_v = power.power_of(l.id, length, params.alpha)?;
            let la = length.powf(params.alpha);
            let noise_term = params.beta * params.noise * la;
            if power_v <= noise_term {
                return Err(Error::InfeasibleLink(l.id));
            }
            derived.push(DerivedLinkParams {
                link: l.id,
                length,
                power: power_v,
                affectance_constant: params.beta / (1.0 - noise_term / power_v),
                signal: power_v / la,
            });
        }

        let mut dist = vec![0.0; n * n];
        let mut affect = vec![0.0; n * n];
        let mut interference = vec![0.0; n * n];
        for (w, lw) in links.iter().enumerate() {
            for (v, lv) in links.iter().enumerate() {
                if w == v {
                    continue;
                }
                let d = link_distance_in(&metric, directionality, lw, lv)?;
                let (dw, dv) = (&derived[w], &derived[v]);
                dist[w * n + v] = d;
                affect[w * n + v] = dv.affectance_constant * (dw.power / dv.power) * (dv.length / d).powf(params.alpha);
                interference[w * n + v] = dw.power / d.powf(params.alpha);
            }
        }

        Ok(Self { metric, links, params, power, directionality, gadgets: None, derived, dist, affect, interference })
    }

    /// Attaches gadget metadata: pairs of link ids that form one gadget.
    pub fn with_gadgets(mut self, gadgets: Vec<[LinkId; 2]>) -> Result<Self> {
        let mut seen = vec![false; self.len()];
        for g in &gadgets {
            for &id in g {
                self.check_link(id)?;
                if std::mem::replace(&mut seen[id], true) {
                    return Err(Error::BadParams(format!("link {id} appears in two gadgets")));
                }
            }
        }
        self.gadgets = Some(gadgets);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn params(&self) -> &SinrParams {
        &self.params
    }

    pub fn power(&self) -> &PowerAssignment {
        &self.power
    }

    pub fn directionality(&self) -> Directionality {
        self.directionality
    }

    pub fn gadgets(&self) -> Option<&[[LinkId; 2]]> {
        self.gadgets.as_deref()
    }

    pub fn link_ids(&self) -> std::ops::Range<LinkId> {
        0..self.len()
    }

    pub fn derived(&self, v: LinkId) -> Result<&DerivedLinkParams> {
        self.derived.get(v).ok_or(Error::UnknownLink(v))
    }

    pub fn derived_all(&self) -> &[DerivedLinkParams] {
        &self.derived
    }

    pub fn check_link(&self, id: LinkId) -> Result<()> {
        if id < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownLink(id))
        }
    }

    /// Checks that `set` holds known, distinct link ids.
    pub fn check_set(&self, set: &[LinkId]) -> Result<()> {
        let mut seen = vec![false; self.len()];
        for &id in set {
            self.check_link(id)?;
            if std::mem::replace(&mut seen[id], true) {
                return Err(Error::BadParams(format!("link {id} listed twice in set")));
            }
        }
        Ok(())
    }

    /// `d_wv`: distance from link `w` to link `v`.
    pub fn link_distance(&self, w: LinkId, v: LinkId) -> Result<f64> {
        self.check_link(w)?;
        self.check_link(v)?;
        if w == v {
            return Err(Error::BadParams("link distance needs two distinct links".into()));
        }
        Ok(self.dist[w * self.len() + v])
    }

    #[inline]
    pub(crate) fn raw_affectance(&self, w: LinkId, v: LinkId) -> f64 {
        self.affect[w * self.len() + v]
    }

    #[inline]
    pub(crate) fn capped_affectance(&self, w: LinkId, v: LinkId) -> f64 {
        self.affect[w * self.len() + v].min(1.0)
    }

    #[inline]
    pub(crate) fn interference(&self, w: LinkId, v: LinkId) -> f64 {
        self.interference[w * self.len() + v]
    }

    #[inline]
    pub(crate) fn signal(&self, v: LinkId) -> f64 {
        self.derived[v].signal
    }

    /// Checks the length-monotone and sub-linear properties over all pairs.
    pub fn validate_power(&self) -> PowerReport {
        let alpha = self.params.alpha;
        let mut report = PowerReport { length_monotone: true, sub_linear: true };
        for a in &self.derived {
            for b in &self.derived {
                if a.length < b.length {
                    continue;
                }
                // a is at least as long as b
                if b.power / a.power > 1.0 + POWER_RATIO_TOL {
                    report.length_monotone = false;
                }
                let da = a.power / a.length.powf(alpha);
                let db = b.power / b.length.powf(alpha);
                if da / db > 1.0 + POWER_RATIO_TOL {
                    report.sub_linear = false;
                }
            }
        }
        report
    }

    /// The same geometry restricted to `keep`, relabelled 0..keep.len() in
    /// the given order. Gadget metadata survives only for whole gadgets.
    pub fn restrict(&self, keep: &[LinkId]) -> Result<Instance> {
        self.check_set(keep)?;
        let links: Vec<Link> = keep
            .iter()
            .enumerate()
            .map(|(i, &old)| Link::new(i, self.links[old].sender, self.links[old].receiver))
            .collect();
        let power = match &self.power {
            PowerAssignment::Table(t) => {
                PowerAssignment::Table(keep.iter().enumerate().map(|(i, old)| (i, t[old])).collect())
            }
            other => other.clone(),
        };
        let mut sub = Instance::new(self.metric.clone(), links, self.params, power, self.directionality)?;
        if let Some(gadgets) = &self.gadgets {
            let pos = |old: LinkId| keep.iter().position(|&k| k == old);
            let kept: Vec<[LinkId; 2]> = gadgets.iter().filter_map(|[a, b]| Some([pos(*a)?, pos(*b)?])).collect();
            sub = sub.with_gadgets(kept)?;
        }
        Ok(sub)
    }
}
