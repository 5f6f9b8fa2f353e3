//! C ABI over the `naqjs` library.
//!
//! Objects cross the boundary as opaque handles, each released with the
//! matching `*_free`. Every fallible
//! call returns a [`NaqjsStatus`]; on failure a message is available from
//! [`naqjs_last_error`] on the same thread until the next failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use naqjs::formats::{parse_circuit, CircuitFormat};
use naqjs::hardware::{builtin_topology_seeded, HardwareModel, Topology};
use naqjs::mapper::initial_mapping;
use naqjs::oracle::{equivalent_under_permutation, MAX_STATE_QUBITS};
use naqjs::partition::{best_partition, RemainingGraph};
use naqjs::sim::{generate_workload, simulate, Policy, RunReport, ShotProfile, TimeModel, Workload, WorkloadParams};
use naqjs::{Circuit, SchedulerConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NaqjsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Parse = 4,
    Simulation = 5,
    Verification = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NaqjsPolicy {
    Fifo = 0,
    FifoP = 1,
    Naqjs = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NaqjsCircuitFormat {
    Qasm = 0,
    Json = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NaqjsShotProfile {
    NoiseModel = 0,
    Device = 1,
}

/// Scheduler weights and time model. Obtain defaults from
/// [`naqjs_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaqjsConfig {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub eta: f64,
    pub delta_t: f64,
    pub repeats: usize,
    pub aging: bool,
    pub shot_time_us: f64,
    pub overhead_s: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NaqjsMetrics {
    pub qpu_time: f64,
    pub tat_max: f64,
    pub tat_avg: f64,
    pub tat_std: f64,
    pub trf: f64,
    pub estimated_pst_avg: f64,
    pub rounds: usize,
    pub makespan: f64,
    pub scheduler_runtime: f64,
}

/// Outcome of [`naqjs_verify_circuit`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NaqjsVerification {
    /// Every two-qubit gate sits on a coupling edge.
    pub legal: bool,
    /// False when the circuit is too wide for the state-vector check.
    pub checked_equivalence: bool,
    pub equivalent: bool,
    pub swaps: usize,
    pub bridges: usize,
    pub epst_star: f64,
}

pub struct NaqjsHardware(HardwareModel);
pub struct NaqjsCircuit(Circuit);
pub struct NaqjsWorkload(Workload);
pub struct NaqjsReport(RunReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

type Failure = (NaqjsStatus, String);

fn fail<T>(status: NaqjsStatus, msg: impl ToString) -> Result<T, Failure> {
    Err((status, msg.to_string()))
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> NaqjsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NaqjsStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            NaqjsStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return fail(NaqjsStatus::NullPointer, format!("{name} is null"));
    }
    CStr::from_ptr(p)
        .to_str()
        .or_else(|_| fail(NaqjsStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or((NaqjsStatus::NullPointer, format!("{name} is null")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return fail(NaqjsStatus::NullPointer, "output pointer is null");
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return fail(NaqjsStatus::NullPointer, "output pointer is null");
    }
    *out = value;
    Ok(())
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn naqjs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn naqjs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub extern "C" fn naqjs_config_default() -> NaqjsConfig {
    let c = SchedulerConfig::default();
    let t = TimeModel::default();
    NaqjsConfig {
        alpha: c.alpha,
        beta: c.beta,
        gamma: c.gamma,
        eta: c.eta,
        delta_t: c.delta_t,
        repeats: c.repeats,
        aging: c.aging,
        shot_time_us: t.shot_time_s * 1e6,
        overhead_s: t.overhead_s,
    }
}

fn split_config(c: &NaqjsConfig) -> Result<(SchedulerConfig, TimeModel), Failure> {
    let cfg = SchedulerConfig {
        alpha: c.alpha,
        beta: c.beta,
        gamma: c.gamma,
        eta: c.eta,
        delta_t: c.delta_t,
        repeats: c.repeats,
        aging: c.aging,
        ..SchedulerConfig::default()
    };
    let time = TimeModel {
        shot_time_s: c.shot_time_us / 1e6,
        overhead_s: c.overhead_s,
    };
    cfg.validate().or_else(|e| fail(NaqjsStatus::InvalidArgument, e))?;
    time.validate().or_else(|e| fail(NaqjsStatus::InvalidArgument, e))?;
    Ok((cfg, time))
}

// ------------------------------------------------------------- hardware

/// Built-in device (`ring16`, `chain16` or `grid66`) with calibration drawn
/// from `calibration_seed`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn naqjs_hardware_builtin(
    name: *const c_char,
    calibration_seed: u64,
    out: *mut *mut NaqjsHardware,
) -> NaqjsStatus {
    guard(|| {
        let topology: Topology = str_arg(name, "name")?.parse().or_else(|e| fail(NaqjsStatus::InvalidArgument, e))?;
        put(out, NaqjsHardware(builtin_topology_seeded(topology, calibration_seed)))
    })
}

/// Device from a calibration JSON document.
///
/// # Safety
/// `name` and `json` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn naqjs_hardware_from_json(
    name: *const c_char,
    json: *const c_char,
    out: *mut *mut NaqjsHardware,
) -> NaqjsStatus {
    guard(|| {
        let hw = HardwareModel::from_json(str_arg(name, "name")?, str_arg(json, "json")?)
            .or_else(|e| fail(NaqjsStatus::Parse, e))?;
        put(out, NaqjsHardware(hw))
    })
}

/// Number of physical qubits, or 0 for a null handle.
///
/// # Safety
/// `hw` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn naqjs_hardware_num_qubits(hw: *const NaqjsHardware) -> usize {
    hw.as_ref().map_or(0, |h| h.0.num_qubits())
}

/// # Safety
/// `hw` must be null or a live handle, which is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn naqjs_hardware_free(hw: *mut NaqjsHardware) {
    free(hw)
}

// -------------------------------------------------------------- circuit

/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn naqjs_circuit_parse(
    text: *const c_char,
    format: NaqjsCircuitFormat,
    out: *mut *mut NaqjsCircuit,
) -> NaqjsStatus {
    guard(|| {
        let format = match format {
            NaqjsCircuitFormat::Qasm => CircuitFormat::Qasm,
            NaqjsCircuitFormat::Json => CircuitFormat::Json,
        };
        let c = parse_circuit(str_arg(text, "text")?, format).or_else(|e| fail(NaqjsStatus::Parse, e))?;
        put(out, NaqjsCircuit(c))
    })
}

/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn naqjs_circuit_num_qubits(c: *const NaqjsCircuit) -> usize {
    c.as_ref().map_or(0, |c| c.0.num_qubits())
}

/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn naqjs_circuit_len(c: *const NaqjsCircuit) -> usize {
    c.as_ref().map_or(0, |c| c.0.len())
}

/// # Safety
/// `c` must be null or a live handle, which is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn naqjs_circuit_free(c: *mut NaqjsCircuit) {
    free(c)
}

/// Places the circuit on the idle device, maps and routes it, and checks
/// coupling legality and (up to the state-vector width limit) equivalence
/// with the original. A failed check is reported through `out`, not the
/// status.
///
/// # Safety
/// `circuit` and `hw` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn naqjs_verify_circuit(
    circuit: *const NaqjsCircuit,
    hw: *const NaqjsHardware,
    repeats: usize,
    seed: u64,
    tol: f64,
    out: *mut NaqjsVerification,
) -> NaqjsStatus {
    guard(|| {
        let circuit = &handle(circuit, "circuit")?.0;
        let hw = &handle(hw, "hw")?.0;
        let cfg = SchedulerConfig {
            repeats,
            ..SchedulerConfig::default()
        };
        cfg.validate().or_else(|e| fail(NaqjsStatus::InvalidArgument, e))?;
        let Some(partition) = best_partition(circuit, &RemainingGraph::full(hw), hw) else {
            return fail(NaqjsStatus::Simulation, format!("no {}-qubit partition on {}", circuit.num_qubits(), hw.name));
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let outcome = initial_mapping(circuit, &partition.qubits, hw, &cfg.mapper(), &mut rng)
            .or_else(|e| fail(NaqjsStatus::Simulation, e))?;
        let routed = &outcome.routed;
        let legal = naqjs::circuit::expand_composites(&routed.circuit)
            .gates()
            .iter()
            .filter(|g| g.kind.is_two_qubit_gate())
            .all(|g| hw.graph.has_edge(g.qubits[0], g.qubits[1]));
        let checked = legal && circuit.num_qubits() <= MAX_STATE_QUBITS;
        let equivalent = checked
            && equivalent_under_permutation(circuit, routed, tol).or_else(|e| fail(NaqjsStatus::Verification, e))?;
        write(
            out,
            NaqjsVerification {
                legal,
                checked_equivalence: checked,
                equivalent,
                swaps: routed.swaps,
                bridges: routed.bridges,
                epst_star: outcome.epst_star,
            },
        )
    })
}

// ------------------------------------------------------------- workload

/// Synthetic workload. If `fit_to` is non-null, widths are capped at
/// `floor(eta * N)` of that device.
///
/// # Safety
/// `fit_to` must be null or a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn naqjs_workload_generate(
    initial: usize,
    arrivals: usize,
    profile: NaqjsShotProfile,
    fit_to: *const NaqjsHardware,
    eta: f64,
    seed: u64,
    out: *mut *mut NaqjsWorkload,
) -> NaqjsStatus {
    guard(|| {
        let profile = match profile {
            NaqjsShotProfile::NoiseModel => ShotProfile::NoiseModel,
            NaqjsShotProfile::Device => ShotProfile::Device,
        };
        let mut params = WorkloadParams {
            initial_jobs: initial,
            arrivals,
            ..WorkloadParams::with_profile(profile)
        };
        if let Some(hw) = fit_to.as_ref() {
            if !(eta > 0.0 && eta <= 1.0) {
                return fail(NaqjsStatus::InvalidArgument, format!("eta must lie in (0, 1], got {eta}"));
            }
            params = params.fitted_to(&hw.0, eta);
        }
        let w = generate_workload(&params, seed).or_else(|e| fail(NaqjsStatus::InvalidArgument, e))?;
        put(out, NaqjsWorkload(w))
    })
}

/// Workload from JSON lines. Circuit file references resolve against
/// `base_dir`, or the working directory if it is null.
///
/// # Safety
/// `text` must be a NUL-terminated string, `base_dir` null or one;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn naqjs_workload_from_jsonl(
    text: *const c_char,
    base_dir: *const c_char,
    seed: u64,
    out: *mut *mut NaqjsWorkload,
) -> NaqjsStatus {
    guard(|| {
        let base = if base_dir.is_null() { "." } else { str_arg(base_dir, "base_dir")? };
        let w = Workload::from_jsonl(str_arg(text, "text")?, Path::new(base), seed)
            .or_else(|e| fail(NaqjsStatus::Parse, e))?;
        put(out, NaqjsWorkload(w))
    })
}

/// # Safety
/// `w` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn naqjs_workload_len(w: *const NaqjsWorkload) -> usize {
    w.as_ref().map_or(0, |w| w.0.len())
}

/// JSON-lines text of the workload; release with [`naqjs_string_free`].
///
/// # Safety
/// `w` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn naqjs_workload_to_jsonl(w: *const NaqjsWorkload) -> *mut c_char {
    match w.as_ref() {
        Some(w) => CString::new(w.0.to_jsonl()).map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `w` must be null or a live handle, which is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn naqjs_workload_free(w: *mut NaqjsWorkload) {
    free(w)
}

// ----------------------------------------------------------- simulation

/// Replays the workload under `policy`. `config` may be null for defaults.
///
/// # Safety
/// `workload` and `hw` must be live handles, `config` null or readable;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn naqjs_simulate(
    workload: *const NaqjsWorkload,
    hw: *const NaqjsHardware,
    policy: NaqjsPolicy,
    config: *const NaqjsConfig,
    seed: u64,
    out: *mut *mut NaqjsReport,
) -> NaqjsStatus {
    guard(|| {
        let w = &handle(workload, "workload")?.0;
        let hw = &handle(hw, "hw")?.0;
        let c = config.as_ref().copied().unwrap_or_else(|| naqjs_config_default());
        let (cfg, time) = split_config(&c)?;
        let policy = match policy {
            NaqjsPolicy::Fifo => Policy::Fifo,
            NaqjsPolicy::FifoP => Policy::FifoP,
            NaqjsPolicy::Naqjs => Policy::Naqjs,
        };
        let r = simulate(w, hw, policy, &cfg, &time, seed).or_else(|e| fail(NaqjsStatus::Simulation, e))?;
        put(out, NaqjsReport(r))
    })
}

/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn naqjs_report_metrics(report: *const NaqjsReport, out: *mut NaqjsMetrics) -> NaqjsStatus {
    guard(|| {
        let r = &handle(report, "report")?.0;
        let m = &r.metrics;
        write(
            out,
            NaqjsMetrics {
                qpu_time: m.qpu_time,
                tat_max: m.tat_max,
                tat_avg: m.tat_avg,
                tat_std: m.tat_std,
                trf: m.trf,
                estimated_pst_avg: m.estimated_pst_avg,
                rounds: m.rounds,
                makespan: m.makespan,
                scheduler_runtime: r.scheduler_runtime,
            },
        )
    })
}

/// Full report as JSON; release with [`naqjs_string_free`]. Null for a null
/// handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn naqjs_report_to_json(report: *const NaqjsReport) -> *mut c_char {
    let Some(r) = report.as_ref() else {
        return ptr::null_mut();
    };
    serde_json::to_string(&r.0)
        .ok()
        .and_then(|s| CString::new(s).ok())
        .map_or(ptr::null_mut(), CString::into_raw)
}

/// # Safety
/// `report` must be null or a live handle, which is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn naqjs_report_free(report: *mut NaqjsReport) {
    free(report)
}
