//! Command-line front end behind the `sinrsched` binary.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::affectance::{incoming_uncapped, is_delta_signal};
use crate::distsim::{run_distributed, AckModel, SimConfig};
use crate::dual::dual_instance;
use crate::error::{Error, Result};
use crate::instance::{Directionality, Instance, LinkId, PowerAssignment, SinrParams};
use crate::instances::{gen_gadget, gen_hub_tree, gen_random_euclidean, load_instance, save_instance, RandomSpec};
use crate::measures::{measure, MeasureRequest};
use crate::sweep::{run_sweep, write_outputs, Family, SweepSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_TOO_LARGE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "sinrsched", version, about = "SINR link scheduling toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate an instance file.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Check that every slot of a schedule file is feasible (or delta-signal).
    Check {
        instance: PathBuf,
        /// JSON document `{"slots": [[ids...], ...]}`.
        slots: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
    },
    /// Compute T, the max average affectance and Lambda.
    Measure(MeasureArgs),
    /// Run the distributed protocol once.
    Simulate(SimulateArgs),
    /// Run a multi-seed grid and write CSV summaries.
    Sweep(SweepArgs),
    /// Write the dual (acknowledgement) instance.
    Dual {
        instance: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum GenFamily {
    /// Pairs of co-located unit links on a line.
    Gadget {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Hub tree with logarithmic average affectance and two-slot schedule.
    #[command(name = "hub-tree")]
    HubTree {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Random links in a square.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 100.0)]
        area_side: f64,
        #[arg(long, default_value_t = 1.0)]
        min_len: f64,
        #[arg(long, default_value_t = 10.0)]
        max_len: f64,
        /// `uniform:P` or `linear:k`.
        #[arg(long, default_value = "uniform:1")]
        power: String,
        #[arg(long)]
        bidirectional: bool,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Which {
    #[value(name = "T")]
    T,
    #[value(name = "Abar")]
    Abar,
    #[value(name = "Lambda")]
    Lambda,
}

#[derive(Args, Debug)]
struct MeasureArgs {
    instance: PathBuf,
    #[arg(long, value_delimiter = ',', value_enum, default_value = "T,Abar,Lambda")]
    which: Vec<Which>,
    /// Use first-fit / peeling / sampling above the exact size limits.
    #[arg(long)]
    heuristic_fallback: bool,
    #[arg(long)]
    heuristic_only: bool,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AckArg {
    Free,
    Explicit,
}

impl From<AckArg> for AckModel {
    fn from(a: AckArg) -> Self {
        match a {
            AckArg::Free => AckModel::FreeAck,
            AckArg::Explicit => AckModel::ExplicitAck,
        }
    }
}

#[derive(Args, Debug)]
struct SimulateArgs {
    instance: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = AckArg::Free)]
    ack_model: AckArg,
    #[arg(long, default_value_t = 1.0)]
    c3: f64,
    #[arg(long, default_value_t = crate::distsim::DEFAULT_MAX_SLOTS)]
    max_slots: u64,
    /// Defaults to the link count.
    #[arg(long)]
    n_estimate: Option<u64>,
    /// JSON trace output.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Per-slot CSV trace output.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Gadget,
    #[value(name = "hub-tree")]
    HubTree,
    Random,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Comma-separated grid of sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    #[arg(long, default_value_t = 100)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    master_seed: u64,
    #[arg(long, value_enum, default_value_t = AckArg::Free)]
    ack_model: AckArg,
    #[arg(long, default_value_t = 1.0)]
    c3: f64,
    #[arg(long, default_value_t = crate::distsim::DEFAULT_MAX_SLOTS)]
    max_slots: u64,
    #[arg(long)]
    n_estimate: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    keep_traces: bool,
    #[arg(long)]
    with_measures: bool,
    #[arg(long, visible_alias = "out")]
    out_dir: PathBuf,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SlotFile {
    slots: Vec<Vec<LinkId>>,
}

fn parse_power(s: &str) -> Result<PowerAssignment> {
    let (kind, val) = s
        .split_once(':')
        .ok_or_else(|| Error::BadParams(format!("power must look like uniform:P or linear:k, got {s}")))?;
    let v: f64 = val.parse().map_err(|_| Error::BadParams(format!("bad power value {val}")))?;
    match kind {
        "uniform" => Ok(PowerAssignment::Uniform(v)),
        "linear" => Ok(PowerAssignment::Linear(v)),
        _ => Err(Error::BadParams(format!("unknown power kind {kind}"))),
    }
}

fn report_instance(out: &mut dyn Write, inst: &Instance, path: &Path) -> Result<()> {
    let pr = inst.validate_power();
    writeln!(
        out,
        "wrote {} links to {} (length-monotone: {}, sub-linear: {})",
        inst.len(),
        path.display(),
        pr.length_monotone,
        pr.sub_linear
    )?;
    Ok(())
}

fn cmd_gen(family: GenFamily, out: &mut dyn Write) -> Result<i32> {
    match family {
        GenFamily::Gadget { n, alpha, out: path } => {
            let inst = gen_gadget(n, alpha)?;
            save_instance(&inst, &path)?;
            report_instance(out, &inst, &path)?;
        }
        GenFamily::HubTree { n, alpha, c, epsilon, out: path } => {
            let ab = gen_hub_tree(n, alpha, c, epsilon)?;
            save_instance(&ab.instance, &path)?;
            report_instance(out, &ab.instance, &path)?;
            writeln!(out, "c = {}, epsilon = {}", ab.c, ab.epsilon)?;
        }
        GenFamily::Random {
            n,
            seed,
            alpha,
            beta,
            noise,
            area_side,
            min_len,
            max_len,
            power,
            bidirectional,
            out: path,
        } => {
            let spec = RandomSpec {
                n,
                area_side,
                min_len,
                max_len,
                params: SinrParams::new(alpha, beta, noise)?,
                power: parse_power(&power)?,
                directionality: if bidirectional {
                    Directionality::Bidirectional
                } else {
                    Directionality::Unidirectional
                },
                seed,
            };
            let inst = gen_random_euclidean(&spec)?;
            save_instance(&inst, &path)?;
            report_instance(out, &inst, &path)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_check(instance: &Path, slots: &Path, delta: f64, out: &mut dyn Write) -> Result<i32> {
    let inst = load_instance(instance)?;
    let text = fs::read_to_string(slots)?;
    let file: SlotFile = serde_json::from_str(&text).map_err(|e| {
        Error::Parse(crate::error::ParseError {
            field: "slots".into(),
            line: e.line(),
            column: e.column(),
            kind: crate::error::ParseErrorKind::Invalid(e.to_string()),
        })
    })?;
    let mut all_ok = true;
    for (i, slot) in file.slots.iter().enumerate() {
        let ok = is_delta_signal(&inst, slot, delta)?;
        let worst = slot
            .iter()
            .map(|&v| incoming_uncapped(&inst, slot, v))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        writeln!(
            out,
            "slot {i}: {} links, max incoming affectance {worst}: {}",
            slot.len(),
            if ok { "ok" } else { "FAIL" }
        )?;
        all_ok &= ok;
    }
    Ok(if all_ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_measure(a: MeasureArgs, out: &mut dyn Write) -> Result<i32> {
    let inst = load_instance(&a.instance)?;
    let req = MeasureRequest {
        scheduling_number: a.which.contains(&Which::T),
        avg_affectance: a.which.contains(&Which::Abar),
        lambda: a.which.contains(&Which::Lambda),
        heuristic_fallback: a.heuristic_fallback,
        heuristic_only: a.heuristic_only,
        lambda_samples: a.samples,
        seed: a.seed,
    };
    let report = measure(&inst, &req)?;
    writeln!(out, "{:<8} {:<12} value", "measure", "method")?;
    if let Some(t) = report.t_exact {
        writeln!(out, "{:<8} {:<12} {t}", "T", "exact")?;
    }
    if let Some(t) = report.t_upper {
        writeln!(out, "{:<8} {:<12} {t}", "T", "first-fit")?;
    }
    for (name, v) in [("Abar", &report.a_bar), ("Lambda", &report.lambda)] {
        if let Some(v) = v {
            let method = serde_json::to_value(v.method).expect("method serializes");
            writeln!(out, "{name:<8} {:<12} {}", method.as_str().unwrap_or(""), v.value)?;
        }
    }
    if let Some(path) = a.out {
        fs::write(path, serde_json::to_string_pretty(&report).expect("report serializes") + "\n")?;
    }
    Ok(EXIT_OK)
}

fn cmd_simulate(a: SimulateArgs, out: &mut dyn Write) -> Result<i32> {
    let inst = load_instance(&a.instance)?;
    let mut cfg = SimConfig::for_instance(&inst, a.seed);
    cfg.c3 = a.c3;
    cfg.max_slots = a.max_slots;
    cfg.ack_model = a.ack_model.into();
    if let Some(n) = a.n_estimate {
        cfg.n_estimate = n;
    }
    let trace = run_distributed(&inst, &cfg)?;
    if let Some(path) = a.out {
        fs::write(path, trace.to_json() + "\n")?;
    }
    if let Some(path) = a.csv {
        trace.write_csv(fs::File::create(path)?)?;
    }
    let completion = trace.completion_slot.map_or_else(|| "none".to_string(), |c| c.to_string());
    writeln!(
        out,
        "links={} completion_slot={completion} truncated={} slots_run={}",
        inst.len(),
        trace.truncated,
        trace.slots_run
    )?;
    Ok(EXIT_OK)
}

fn cmd_sweep(a: SweepArgs, out: &mut dyn Write) -> Result<i32> {
    let family = match a.family {
        FamilyArg::Gadget => Family::Gadget,
        FamilyArg::HubTree => Family::HubTree,
        FamilyArg::Random => Family::Random,
    };
    let mut spec = SweepSpec::new(family, a.n, a.alpha, a.seeds, a.master_seed);
    spec.c3 = a.c3;
    spec.max_slots = a.max_slots;
    spec.n_estimate = a.n_estimate;
    spec.ack_model = a.ack_model.into();
    spec.workers = a.workers;
    spec.keep_traces = a.keep_traces;
    spec.with_measures = a.with_measures;
    let result = run_sweep(&spec)?;
    write_outputs(&result, &a.out_dir)?;
    for s in &result.summary {
        let mean = s.mean.map_or_else(|| "none".to_string(), |m| m.to_string());
        writeln!(
            out,
            "n={} completed={}/{} truncated={} mean_completion={mean}",
            s.n, s.completed, s.seeds, s.truncated
        )?;
    }
    if let Some(f) = result.fit {
        writeln!(out, "slope per doubling of n: {} (intercept {})", f.slope, f.intercept)?;
    }
    Ok(if result.successful_rows() == 0 { EXIT_CHECK_FAILED } else { EXIT_OK })
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.cmd {
        Command::Gen { family } => cmd_gen(family, out),
        Command::Check { instance, slots, delta } => cmd_check(&instance, &slots, delta, out),
        Command::Measure(a) => cmd_measure(a, out),
        Command::Simulate(a) => cmd_simulate(a, out),
        Command::Sweep(a) => cmd_sweep(a, out),
        Command::Dual { instance, out: path } => {
            let dual = dual_instance(&load_instance(&instance)?)?;
            save_instance(&dual, &path)?;
            report_instance(out, &dual, &path)?;
            Ok(EXIT_OK)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::TooLarge { .. } => EXIT_TOO_LARGE,
        _ => EXIT_INPUT,
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Normal output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
