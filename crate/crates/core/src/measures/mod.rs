//! Scheduling number, maximum average affectance and the Lambda measure,
//! each with an exact exponential-time route and a scalable heuristic.

mod avg;
mod lambda;
mod schedule;

use serde::{Deserialize, Serialize};

pub use avg::{avg_value, max_avg_affectance, AVG_EXACT_LIMIT};
pub use lambda::{lambda_exact, lambda_sampled, lambda_value, LAMBDA_EXACT_LIMIT};
pub use schedule::{schedule_first_fit, scheduling_number_exact, Schedule, SCHEDULE_EXACT_LIMIT};

use crate::error::{Error, Result};
use crate::instance::{Instance, LinkId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Peeling,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AvgMode {
    Exact,
    Peeling,
}

/// A measure value together with the subset attaining it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureValue {
    pub value: f64,
    pub method: Method,
    pub witness: Vec<LinkId>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    #[serde(rename = "T_exact", skip_serializing_if = "Option::is_none", default)]
    pub t_exact: Option<usize>,
    #[serde(rename = "T_upper", skip_serializing_if = "Option::is_none", default)]
    pub t_upper: Option<usize>,
    #[serde(rename = "schedule", skip_serializing_if = "Option::is_none", default)]
    pub schedule: Option<Schedule>,
    #[serde(rename = "A_bar", skip_serializing_if = "Option::is_none", default)]
    pub a_bar: Option<MeasureValue>,
    #[serde(rename = "Lambda", skip_serializing_if = "Option::is_none", default)]
    pub lambda: Option<MeasureValue>,
}

/// Which measures to compute and how to behave above the exact-size guards.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasureRequest {
    pub scheduling_number: bool,
    pub avg_affectance: bool,
    pub lambda: bool,
    /// Fall back to first-fit / peeling / sampling instead of failing with
    /// [`Error::TooLarge`].
    pub heuristic_fallback: bool,
    /// Skip the exact routes entirely.
    pub heuristic_only: bool,
    pub lambda_samples: usize,
    pub seed: u64,
}

impl Default for MeasureRequest {
    fn default() -> Self {
        Self {
            scheduling_number: true,
            avg_affectance: true,
            lambda: true,
            heuristic_fallback: false,
            heuristic_only: false,
            lambda_samples: 1000,
            seed: 0,
        }
    }
}

pub fn measure(inst: &Instance, req: &MeasureRequest) -> Result<MeasureReport> {
    let mut report = MeasureReport::default();
    let n = inst.len();
    let exact_ok = |limit: usize| -> Result<bool> {
        if req.heuristic_only {
            Ok(false)
        } else if n <= limit {
            Ok(true)
        } else if req.heuristic_fallback {
            Ok(false)
        } else {
            Err(Error::TooLarge { what: "exact computation", links: n, limit })
        }
    };

    if req.scheduling_number {
        report.t_upper = Some(schedule_first_fit(inst).len());
        if exact_ok(SCHEDULE_EXACT_LIMIT)? {
            let (t, sched) = scheduling_number_exact(inst)?;
            report.t_exact = Some(t);
            report.schedule = Some(sched);
        }
    }
    if req.avg_affectance {
        let mode = if exact_ok(AVG_EXACT_LIMIT)? { AvgMode::Exact } else { AvgMode::Peeling };
        report.a_bar = Some(max_avg_affectance(inst, mode)?);
    }
    if req.lambda {
        report.lambda = Some(if exact_ok(LAMBDA_EXACT_LIMIT)? {
            lambda_exact(inst)?
        } else {
            lambda_sampled(inst, req.lambda_samples, req.seed)?
        });
    }
    Ok(report)
}

pub(crate) fn mask_members(mask: u64) -> impl Iterator<Item = LinkId> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// Picks the larger value; equal values keep the numerically smaller mask.
pub(crate) fn better(a: (f64, u64), b: (f64, u64)) -> (f64, u64) {
    match a.0.total_cmp(&b.0) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => {
            if a.1 <= b.1 {
                a
            } else {
                b
            }
        }
    }
}
