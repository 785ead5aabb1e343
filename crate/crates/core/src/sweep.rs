//! Multi-seed experiment grids over one instance family, with CSV output
//! that is byte-identical for a fixed master seed.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::distsim::{
    active_gadget_curve, derive_seed, gadget_survival, run_distributed, AckModel, SimConfig, SimTrace,
    DEFAULT_MAX_SLOTS,
};
use crate::error::{Error, Result};
use crate::instance::{Instance, PowerAssignment, SinrParams};
use crate::instances::{gen_gadget, gen_hub_tree, gen_random_euclidean, RandomSpec};
use crate::measures::{measure, MeasureRequest};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Gadget,
    HubTree,
    /// Random planar links with `beta = 1`, `N = 0`, uniform power; a fresh
    /// instance per seed.
    Random,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Gadget => "gadget",
            Family::HubTree => "hub-tree",
            Family::Random => "random",
        }
    }

    fn generate(self, n: usize, alpha: f64, seed: u64) -> Result<Instance> {
        match self {
            Family::Gadget => gen_gadget(n, alpha),
            Family::HubTree => Ok(gen_hub_tree(n, alpha, None, None)?.instance),
            Family::Random => gen_random_euclidean(&RandomSpec::new(
                n,
                SinrParams::new(alpha, 1.0, 0.0)?,
                PowerAssignment::Uniform(1.0),
                seed,
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub family: Family,
    pub ns: Vec<usize>,
    pub alpha: f64,
    pub seeds: u64,
    pub master_seed: u64,
    pub c3: f64,
    /// `None` uses the instance's link count.
    pub n_estimate: Option<u64>,
    pub max_slots: u64,
    pub ack_model: AckModel,
    pub with_measures: bool,
    pub keep_traces: bool,
    /// Thread budget; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl SweepSpec {
    pub fn new(family: Family, ns: Vec<usize>, alpha: f64, seeds: u64, master_seed: u64) -> Self {
        Self {
            family,
            ns,
            alpha,
            seeds,
            master_seed,
            c3: 1.0,
            n_estimate: None,
            max_slots: DEFAULT_MAX_SLOTS,
            ack_model: AckModel::FreeAck,
            with_measures: false,
            keep_traces: false,
            workers: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.ns.is_empty() {
            return Err(Error::ConfigInvalid("sweep grid is empty".into()));
        }
        if self.seeds == 0 {
            return Err(Error::ConfigInvalid("sweep needs at least one seed".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::ConfigInvalid("worker budget must be positive".into()));
        }
        Ok(())
    }
}

/// One `(grid point, seed)` run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RawRow {
    pub family: &'static str,
    pub n: usize,
    pub alpha: f64,
    pub seed_index: u64,
    pub seed: u64,
    pub links: usize,
    pub completion_slot: Option<u64>,
    pub truncated: bool,
    pub slots_run: u64,
    pub survival_active: Option<u64>,
    pub survival_survived: Option<u64>,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub family: &'static str,
    pub n: usize,
    pub alpha: f64,
    pub seeds: u64,
    pub completed: u64,
    pub truncated: u64,
    pub errors: u64,
    pub mean: Option<f64>,
    pub median: Option<f64>,
    pub min: Option<u64>,
    pub max: Option<u64>,
    pub std_err: Option<f64>,
    pub survival_active: Option<u64>,
    pub survival_survived: Option<u64>,
    pub survival_frequency: Option<f64>,
    pub t_exact: Option<usize>,
    pub t_upper: Option<usize>,
    pub a_bar: Option<f64>,
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveRow {
    pub family: &'static str,
    pub n: usize,
    pub t: u64,
    pub mean_active: f64,
}

/// Least-squares line `mean completion = slope * log2(n) + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub raw: Vec<RawRow>,
    pub summary: Vec<SummaryRow>,
    pub curves: Vec<CurveRow>,
    pub fit: Option<Fit>,
    /// `(point index, seed index, trace)` when traces were kept.
    pub traces: Vec<(usize, u64, SimTrace)>,
}

impl SweepResult {
    pub fn successful_rows(&self) -> usize {
        self.raw.iter().filter(|r| r.error.is_empty()).count()
    }
}

type Curve = Vec<(u64, usize)>;

struct RunOutput {
    row: RawRow,
    curve: Option<Curve>,
    trace: Option<SimTrace>,
}

fn run_one(spec: &SweepSpec, point: usize, shared: Option<&Instance>, seed_index: u64) -> RunOutput {
    let n = spec.ns[point];
    let seed = derive_seed(spec.master_seed, &[point as u64, seed_index]);
    let mut row = RawRow {
        family: spec.family.name(),
        n,
        alpha: spec.alpha,
        seed_index,
        seed,
        links: 0,
        completion_slot: None,
        truncated: false,
        slots_run: 0,
        survival_active: None,
        survival_survived: None,
        error: String::new(),
    };
    let result = (|| -> Result<(Option<Curve>, SimTrace)> {
        let owned;
        let inst = match shared {
            Some(i) => i,
            None => {
                owned = spec.family.generate(n, spec.alpha, derive_seed(seed, &[0]))?;
                &owned
            }
        };
        row.links = inst.len();
        let cfg = SimConfig {
            c3: spec.c3,
            n_estimate: spec.n_estimate.unwrap_or((inst.len() as u64).max(2)),
            max_slots: spec.max_slots,
            ack_model: spec.ack_model,
            seed,
        };
        let trace = run_distributed(inst, &cfg)?;
        let curve = match inst.gadgets() {
            Some(g) => {
                let s = gadget_survival(&trace, Some(g))?;
                row.survival_active = Some(s.active);
                row.survival_survived = Some(s.survived);
                Some(active_gadget_curve(&trace, Some(g))?)
            }
            None => None,
        };
        Ok((curve, trace))
    })();
    match result {
        Ok((curve, trace)) => {
            row.completion_slot = trace.completion_slot;
            row.truncated = trace.truncated;
            row.slots_run = trace.slots_run;
            RunOutput { row, curve, trace: spec.keep_traces.then_some(trace) }
        }
        Err(e) => {
            row.error = e.to_string();
            RunOutput { row, curve: None, trace: None }
        }
    }
}

fn summarize(spec: &SweepSpec, n: usize, rows: &[RawRow], inst: Option<&Instance>) -> SummaryRow {
    let mut done: Vec<u64> = rows.iter().filter_map(|r| r.completion_slot).collect();
    let k = done.len();
    let (mean, median, std_err) = if k == 0 {
        (None, None, None)
    } else {
        let mean = done.iter().map(|&x| x as f64).sum::<f64>() / k as f64;
        done.sort_unstable();
        let median = if k % 2 == 1 { done[k / 2] as f64 } else { (done[k / 2 - 1] as f64 + done[k / 2] as f64) / 2.0 };
        let std_err = if k > 1 {
            let var = done.iter().map(|&x| (x as f64 - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
            (var / k as f64).sqrt()
        } else {
            0.0
        };
        (Some(mean), Some(median), Some(std_err))
    };
    let surv: Vec<_> = rows.iter().filter_map(|r| r.survival_active.zip(r.survival_survived)).collect();
    let (sa, ss) = if surv.is_empty() {
        (None, None)
    } else {
        (Some(surv.iter().map(|s| s.0).sum::<u64>()), Some(surv.iter().map(|s| s.1).sum::<u64>()))
    };

    let mut summary = SummaryRow {
        family: spec.family.name(),
        n,
        alpha: spec.alpha,
        seeds: rows.len() as u64,
        completed: k as u64,
        truncated: rows.iter().filter(|r| r.truncated).count() as u64,
        errors: rows.iter().filter(|r| !r.error.is_empty()).count() as u64,
        mean,
        median,
        min: done.first().copied(),
        max: done.last().copied(),
        std_err,
        survival_active: sa,
        survival_survived: ss,
        survival_frequency: sa.zip(ss).filter(|&(a, _)| a > 0).map(|(a, s)| s as f64 / a as f64),
        t_exact: None,
        t_upper: None,
        a_bar: None,
        lambda: None,
    };
    if let (true, Some(inst)) = (spec.with_measures, inst) {
        let req = MeasureRequest { heuristic_fallback: true, seed: spec.master_seed, ..MeasureRequest::default() };
        if let Ok(m) = measure(inst, &req) {
            summary.t_exact = m.t_exact;
            summary.t_upper = m.t_upper;
            summary.a_bar = m.a_bar.map(|v| v.value);
            summary.lambda = m.lambda.map(|v| v.value);
        }
    }
    summary
}

fn mean_curve(spec: &SweepSpec, n: usize, curves: &[Vec<(u64, usize)>]) -> Vec<CurveRow> {
    let len = curves.iter().map(Vec::len).max().unwrap_or(0);
    (0..len)
        .map(|t| {
            let total: usize = curves.iter().map(|c| c.get(t).or(c.last()).map_or(0, |p| p.1)).sum();
            CurveRow { family: spec.family.name(), n, t: t as u64, mean_active: total as f64 / curves.len() as f64 }
        })
        .collect()
}

fn fit(summary: &[SummaryRow]) -> Option<Fit> {
    let pts: Vec<(f64, f64)> = summary.iter().filter_map(|s| s.mean.map(|m| ((s.n as f64).log2(), m))).collect();
    let k = pts.len() as f64;
    if pts.len() < 2 {
        return None;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some(Fit { slope, intercept: my - slope * mx, points: pts.len() })
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let body = || -> Result<SweepResult> {
        // Deterministic families share one instance per grid point.
        let shared: Vec<Option<Instance>> = spec
            .ns
            .par_iter()
            .map(|&n| match spec.family {
                Family::Random => Ok(None),
                f => f.generate(n, spec.alpha, 0).map(Some),
            })
            .collect::<Result<_>>()?;
        let jobs: Vec<(usize, u64)> = (0..spec.ns.len()).flat_map(|p| (0..spec.seeds).map(move |s| (p, s))).collect();
        let outputs: Vec<RunOutput> = jobs.par_iter().map(|&(p, s)| run_one(spec, p, shared[p].as_ref(), s)).collect();

        let mut result =
            SweepResult { raw: Vec::new(), summary: Vec::new(), curves: Vec::new(), fit: None, traces: Vec::new() };
        for (p, chunk) in outputs.chunks(spec.seeds as usize).enumerate() {
            let rows: Vec<RawRow> = chunk.iter().map(|o| o.row.clone()).collect();
            let measured = match &shared[p] {
                Some(i) => Some(i.clone()),
                None if spec.with_measures => {
                    spec.family.generate(spec.ns[p], spec.alpha, derive_seed(rows[0].seed, &[0])).ok()
                }
                None => None,
            };
            result.summary.push(summarize(spec, spec.ns[p], &rows, measured.as_ref()));
            let curves: Vec<_> = chunk.iter().filter_map(|o| o.curve.clone()).collect();
            if !curves.is_empty() {
                result.curves.extend(mean_curve(spec, spec.ns[p], &curves));
            }
            result.raw.extend(rows);
        }
        for ((p, s), o) in jobs.into_iter().zip(outputs) {
            if let Some(t) = o.trace {
                result.traces.push((p, s, t));
            }
        }
        result.fit = fit(&result.summary);
        Ok(result)
    };
    match spec.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::ConfigInvalid(e.to_string()))?
            .install(body),
        None => body(),
    }
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `raw.csv`, `summary.csv`, `curves.csv` (gadget families), `fit.csv`
/// (when the grid varies `n`) and `traces/` (when kept) into `dir`.
pub fn write_outputs(result: &SweepResult, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_csv(&dir.join("raw.csv"), &result.raw)?;
    write_csv(&dir.join("summary.csv"), &result.summary)?;
    if !result.curves.is_empty() {
        write_csv(&dir.join("curves.csv"), &result.curves)?;
    }
    if let Some(f) = result.fit {
        write_csv(&dir.join("fit.csv"), &[f])?;
    }
    if !result.traces.is_empty() {
        let tdir = dir.join("traces");
        fs::create_dir_all(&tdir)?;
        for (p, s, t) in &result.traces {
            let n = result.summary[*p].n;
            fs::write(tdir.join(format!("n{n}_seed{s}.json")), t.to_json())?;
        }
    }
    Ok(())
}
