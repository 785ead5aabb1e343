//! C ABI over `sinrsched`.
//!
//! Every fallible function returns a [`SinrStatus`] and writes its result
//! through an out-pointer. On failure a description is available from
//! [`sinr_last_error_message`] on the same thread. Objects returned through
//! `SinrInstance **` / `SinrTrace **` / `char **` are owned by the caller and
//! released with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sinrsched::affectance::{affectance, is_delta_signal, is_feasible, sinr, Cap};
use sinrsched::distsim::{run_distributed, AckModel, SimConfig, SimTrace};
use sinrsched::dual::dual_instance;
use sinrsched::instances::{
    from_json_str, gen_gadget, gen_hub_tree, gen_random_euclidean, load_instance, save_instance, to_json_string,
    RandomSpec,
};
use sinrsched::measures::{lambda_exact, max_avg_affectance, scheduling_number_exact, AvgMode};
use sinrsched::{Error, Instance, LinkId, PowerAssignment, SinrParams};

/// Result codes. Zero is success, everything else is negative.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SinrStatus {
    Ok = 0,
    NullPointer = -1,
    InvalidArgument = -2,
    Parse = -3,
    UnknownLink = -4,
    TooLarge = -5,
    Infeasible = -6,
    Io = -7,
    Internal = -255,
}

/// Opaque validated instance.
pub struct SinrInstance(Instance);

/// Opaque simulation trace.
pub struct SinrTrace(SimTrace);

/// Simulation settings. Zero `n_estimate` or `max_slots` selects the default
/// (link count, at least 2; one million slots).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SinrSimConfig {
    pub c3: f64,
    pub n_estimate: u64,
    pub max_slots: u64,
    pub explicit_ack: bool,
    pub seed: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum Fail {
    Null(&'static str),
    Arg(String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn status_of(e: &Error) -> SinrStatus {
    match e {
        Error::UnknownLink(_) => SinrStatus::UnknownLink,
        Error::TooLarge { .. } => SinrStatus::TooLarge,
        Error::InfeasibleInput | Error::InfeasibleLink(_) => SinrStatus::Infeasible,
        Error::Parse(_) | Error::SchemaVersionMismatch { .. } => SinrStatus::Parse,
        Error::Io(_) | Error::Csv(_) => SinrStatus::Io,
        _ => SinrStatus::InvalidArgument,
    }
}

fn call(f: impl FnOnce() -> Result<(), Fail>) -> SinrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SinrStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_last_error(format!("null pointer passed for `{what}`"));
            SinrStatus::NullPointer
        }
        Ok(Err(Fail::Arg(msg))) => {
            set_last_error(msg);
            SinrStatus::InvalidArgument
        }
        Ok(Err(Fail::Lib(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("internal error (panic caught at the C boundary)".into());
            SinrStatus::Internal
        }
    }
}

unsafe fn instance<'a>(p: *const SinrInstance) -> Result<&'a Instance, Fail> {
    p.as_ref().map(|i| &i.0).ok_or(Fail::Null("instance"))
}

unsafe fn trace<'a>(p: *const SinrTrace) -> Result<&'a SimTrace, Fail> {
    p.as_ref().map(|t| &t.0).ok_or(Fail::Null("trace"))
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn string(p: *const c_char, what: &'static str) -> Result<String, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p).to_str().map(str::to_owned).map_err(|_| Fail::Arg(format!("`{what}` is not valid UTF-8")))
}

unsafe fn link_set<'a>(ids: *const usize, len: usize) -> Result<&'a [LinkId], Fail> {
    if len == 0 {
        Ok(&[])
    } else if ids.is_null() {
        Err(Fail::Null("ids"))
    } else {
        Ok(std::slice::from_raw_parts(ids, len))
    }
}

fn boxed_instance(slot: &mut *mut SinrInstance, inst: Instance) {
    *slot = Box::into_raw(Box::new(SinrInstance(inst)));
}

fn c_string(slot: &mut *mut c_char, s: String) -> Result<(), Fail> {
    *slot = CString::new(s).map_err(|_| Fail::Arg("output contains NUL".into()))?.into_raw();
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sinr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failure on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sinr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn sinr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `path` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sinr_instance_load(path: *const c_char, out_inst: *mut *mut SinrInstance) -> SinrStatus {
    call(|| {
        let path = string(path, "path")?;
        let slot = out(out_inst, "out")?;
        boxed_instance(slot, load_instance(path)?);
        Ok(())
    })
}

/// # Safety
/// `inst` must be a live instance and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sinr_instance_save(inst: *const SinrInstance, path: *const c_char) -> SinrStatus {
    call(|| {
        save_instance(instance(inst)?, string(path, "path")?)?;
        Ok(())
    })
}

/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sinr_instance_from_json(json: *const c_char, out_inst: *mut *mut SinrInstance) -> SinrStatus {
    call(|| {
        let text = string(json, "json")?;
        let slot = out(out_inst, "out")?;
        boxed_instance(slot, from_json_str(&text)?);
        Ok(())
    })
}

/// Serializes to the JSON instance format; free the result with
/// [`sinr_string_free`].
///
/// # Safety
/// `inst` must be a live instance and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sinr_instance_to_json(inst: *const SinrInstance, out_json: *mut *mut c_char) -> SinrStatus {
    call(|| {
        let text = to_json_string(instance(inst)?);
        c_string(out(out_json, "out")?, text)
    })
}

/// # Safety
/// `inst` must be NULL or an instance from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sinr_instance_free(inst: *mut SinrInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sinr_gen_gadget(n: usize, alpha: f64, out_inst: *mut *mut SinrInstance) -> SinrStatus {
    call(|| {
        let slot = out(out_inst, "out")?;
        boxed_instance(slot, gen_gadget(n, alpha)?);
        Ok(())
    })
}

/// Non-positive `c` or `epsilon` selects the automatic choice.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sinr_gen_hub_tree(
    n: usize,
    alpha: f64,
    c: f64,
    epsilon: f64,
    out_inst: *mut *mut SinrInstance,
) -> SinrStatus {
    call(|| {
        let slot = out(out_inst, "out")?;
        let ab = gen_hub_tree(n, alpha, (c > 0.0).then_some(c), (epsilon > 0.0).then_some(epsilon))?;
        boxed_instance(slot, ab.instance);
        Ok(())
    })
}

/// Random planar instance with uniform unit power in a 100 x 100 square,
/// link lengths in [1, 10].
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sinr_gen_random(
    n: usize,
    alpha: f64,
    beta: f64,
    noise: f64,
    seed: u64,
    out_inst: *mut *mut SinrInstance,
) -> SinrStatus {
    call(|| {
        let slot = out(out_inst, "out")?;
        let spec = RandomSpec::new(n, SinrParams::new(alpha, beta, noise)?, PowerAssignment::Uniform(1.0), seed);
        boxed_instance(slot, gen_random_euclidean(&spec)?);
        Ok(())
    })
}

/// # Safety
/// `inst` must be a live instance and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sinr_instance_link_count(inst: *const SinrInstance, out_count: *mut usize) -> SinrStatus {
    call(|| {
        *out(out_count, "out")? = instance(inst)?.len();
        Ok(())
    })
}

/// # Safety
/// `inst` must be a live instance and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sinr_affectance(
    inst: *const SinrInstance,
    w: usize,
    v: usize,
    capped: bool,
    out_value: *mut f64,
) -> SinrStatus {
    call(|| {
        let cap = if capped { Cap::Capped } else { Cap::Uncapped };
        *out(out_value, "out")? = affectance(instance(inst)?, w, v, cap)?;
        Ok(())
    })
}

/// SINR at `v` when exactly the `len` links in `ids` transmit (`v` among them).
///
/// # Safety
/// `ids` must point to `len` readable ids and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sinr_sinr(
    inst: *const SinrInstance,
    v: usize,
    ids: *const usize,
    len: usize,
    out_value: *mut f64,
) -> SinrStatus {
    call(|| {
        *out(out_value, "out")? = sinr(instance(inst)?, v, link_set(ids, len)?)?;
        Ok(())
    })
}

/// # Safety
/// `ids` must point to `len` readable ids and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sinr_is_feasible(
    inst: *const SinrInstance,
    ids: *const usize,
    len: usize,
    out_flag: *mut bool,
) -> SinrStatus {
    call(|| {
        *out(out_flag, "out")? = is_feasible(instance(inst)?, link_set(ids, len)?)?;
        Ok(())
    })
}

/// # Safety
/// `ids` must point to `len` readable ids and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sinr_is_delta_signal(
    inst: *const SinrInstance,
    ids: *const usize,
    len: usize,
    delta: f64,
    out_flag: *mut bool,
) -> SinrStatus {
    call(|| {
        *out(out_flag, "out")? = is_delta_signal(instance(inst)?, link_set(ids, len)?, delta)?;
        Ok(())
    })
}

/// Exact scheduling number; `SINR_STATUS_TOO_LARGE` above 15 links.
///
/// # Safety
/// `inst` must be a live instance and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sinr_scheduling_number_exact(inst: *const SinrInstance, out_t: *mut usize) -> SinrStatus {
    call(|| {
        *out(out_t, "out")? = scheduling_number_exact(instance(inst)?)?.0;
        Ok(())
    })
}

/// # Safety
/// `inst` must be a live instance and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sinr_lambda_exact(inst: *const SinrInstance, out_value: *mut f64) -> SinrStatus {
    call(|| {
        *out(out_value, "out")? = lambda_exact(instance(inst)?)?.value;
        Ok(())
    })
}

/// Exact (`exact = true`, at most 20 links) or peeling estimate.
///
/// # Safety
/// `inst` must be a live instance and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sinr_max_avg_affectance(
    inst: *const SinrInstance,
    exact: bool,
    out_value: *mut f64,
) -> SinrStatus {
    call(|| {
        let mode = if exact { AvgMode::Exact } else { AvgMode::Peeling };
        *out(out_value, "out")? = max_avg_affectance(instance(inst)?, mode)?.value;
        Ok(())
    })
}

/// # Safety
/// `inst` must be a live instance and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sinr_dual_instance(inst: *const SinrInstance, out_inst: *mut *mut SinrInstance) -> SinrStatus {
    call(|| {
        let dual = dual_instance(instance(inst)?)?;
        boxed_instance(out(out_inst, "out")?, dual);
        Ok(())
    })
}

/// Defaults: `c3 = 1`, automatic size estimate and slot cap, free
/// acknowledgements, seed 0.
#[no_mangle]
pub extern "C" fn sinr_sim_config_default() -> SinrSimConfig {
    SinrSimConfig { c3: 1.0, n_estimate: 0, max_slots: 0, explicit_ack: false, seed: 0 }
}

/// # Safety
/// `inst` must be a live instance, `cfg` readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sinr_simulate(
    inst: *const SinrInstance,
    cfg: *const SinrSimConfig,
    out_trace: *mut *mut SinrTrace,
) -> SinrStatus {
    call(|| {
        let inst = instance(inst)?;
        let c = cfg.as_ref().ok_or(Fail::Null("cfg"))?;
        let slot = out(out_trace, "out")?;
        let mut sim = SimConfig::for_instance(inst, c.seed);
        sim.c3 = c.c3;
        if c.n_estimate != 0 {
            sim.n_estimate = c.n_estimate;
        }
        if c.max_slots != 0 {
            sim.max_slots = c.max_slots;
        }
        sim.ack_model = if c.explicit_ack { AckModel::ExplicitAck } else { AckModel::FreeAck };
        *slot = Box::into_raw(Box::new(SinrTrace(run_distributed(inst, &sim)?)));
        Ok(())
    })
}

/// Slot by which every link finished, or 0 for a truncated run.
///
/// # Safety
/// `trace` must be a live trace and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sinr_trace_completion_slot(trace_ptr: *const SinrTrace, out_slot: *mut u64) -> SinrStatus {
    call(|| {
        *out(out_slot, "out")? = trace(trace_ptr)?.completion_slot.unwrap_or(0);
        Ok(())
    })
}

/// # Safety
/// `trace` must be a live trace and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sinr_trace_truncated(trace_ptr: *const SinrTrace, out_flag: *mut bool) -> SinrStatus {
    call(|| {
        *out(out_flag, "out")? = trace(trace_ptr)?.truncated;
        Ok(())
    })
}

/// # Safety
/// `trace` must be a live trace and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sinr_trace_slots_run(trace_ptr: *const SinrTrace, out_slots: *mut u64) -> SinrStatus {
    call(|| {
        *out(out_slots, "out")? = trace(trace_ptr)?.slots_run;
        Ok(())
    })
}

/// Completion slot of one link, 0 if it never finished.
///
/// # Safety
/// `trace` must be a live trace and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sinr_trace_link_completion(
    trace_ptr: *const SinrTrace,
    link: usize,
    out_slot: *mut u64,
) -> SinrStatus {
    call(|| {
        let t = trace(trace_ptr)?;
        let o = t.links.get(link).ok_or(Fail::Lib(Error::UnknownLink(link)))?;
        *out(out_slot, "out")? = o.completion.unwrap_or(0);
        Ok(())
    })
}

/// Full trace as JSON; free with [`sinr_string_free`].
///
/// # Safety
/// `trace` must be a live trace and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sinr_trace_to_json(trace_ptr: *const SinrTrace, out_json: *mut *mut c_char) -> SinrStatus {
    call(|| {
        let text = trace(trace_ptr)?.to_json();
        c_string(out(out_json, "out")?, text)
    })
}

/// # Safety
/// `trace` must be NULL or a trace from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sinr_trace_free(trace_ptr: *mut SinrTrace) {
    if !trace_ptr.is_null() {
        drop(Box::from_raw(trace_ptr));
    }
}
