//! Discrete-event replay of a job stream on one device.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use log::debug;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, LogNormal};
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateOp, Job, JobId};
use crate::error::{ConfigError, SimError};
use crate::formats::{parse_circuit, CircuitFormat, CircuitJson};
use crate::hardware::HardwareModel;
use crate::partition::{best_partition, RemainingGraph};
use crate::scheduler::{fifo_order, fill_round, rearrange, ExecutionRound, RoundLimits, SchedulerConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    /// One job at a time in submission order.
    Fifo,
    /// Parallel rounds filled in submission order.
    FifoP,
    Naqjs,
}

impl Policy {
    pub const ALL: [Policy; 3] = [Policy::Fifo, Policy::FifoP, Policy::Naqjs];

    pub fn name(&self) -> &'static str {
        match self {
            Policy::Fifo => "fifo",
            Policy::FifoP => "fifo-p",
            Policy::Naqjs => "naqjs",
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Policy {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "fifo" => Ok(Policy::Fifo),
            "fifo-p" | "fifop" | "fifo_p" => Ok(Policy::FifoP),
            "naqjs" => Ok(Policy::Naqjs),
            other => Err(ConfigError::Invalid(format!(
                "unknown policy `{other}` (expected fifo, fifo-p or naqjs)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeModel {
    pub shot_time_s: f64,
    /// Fixed cost per round (compilation, loading, readout).
    pub overhead_s: f64,
}

impl Default for TimeModel {
    fn default() -> Self {
        TimeModel {
            shot_time_s: 200e-6,
            overhead_s: 10.0,
        }
    }
}

impl TimeModel {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.shot_time_s.is_finite() && self.shot_time_s > 0.0) {
            return Err(ConfigError::Invalid(format!("shot time must be > 0, got {}", self.shot_time_s)));
        }
        if !(self.overhead_s.is_finite() && self.overhead_s > 0.0) {
            return Err(ConfigError::Invalid(format!("overhead must be > 0, got {}", self.overhead_s)));
        }
        Ok(())
    }

    pub fn execution_time(&self, shots: u64) -> f64 {
        shots as f64 * self.shot_time_s
    }

    pub fn round_duration(&self, shots: u64) -> f64 {
        self.execution_time(shots) + self.overhead_s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Workload {
    /// Jobs present at time 0.
    pub initial: Vec<Job>,
    /// Later jobs, sorted by submission time.
    pub arrivals: Vec<Job>,
    pub seed: u64,
}

impl Workload {
    pub fn jobs(&self) -> impl Iterator<Item = &Job> {
        self.initial.iter().chain(self.arrivals.iter())
    }

    pub fn len(&self) -> usize {
        self.initial.len() + self.arrivals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Splits jobs into those submitted at 0 and later arrivals ordered by
    /// (submit time, id).
    pub fn from_jobs(jobs: Vec<Job>, seed: u64) -> Result<Self, SimError> {
        let mut ids = HashSet::new();
        for j in &jobs {
            if !ids.insert(j.id) {
                return Err(SimError::InvalidWorkload(format!("duplicate job id {}", j.id)));
            }
        }
        let (mut initial, mut arrivals): (Vec<Job>, Vec<Job>) = jobs.into_iter().partition(|j| j.submit_time == 0.0);
        initial.sort_by_key(|j| j.id);
        arrivals.sort_by(|a, b| a.submit_time.total_cmp(&b.submit_time).then(a.id.cmp(&b.id)));
        Ok(Workload { initial, arrivals, seed })
    }

    /// One JSON object per line with inline circuits.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for j in self.jobs() {
            let line = JobLine {
                id: j.id.0,
                t: j.submit_time,
                shots: j.shots,
                circuit: CircuitRef::Inline(CircuitJson::from(&j.circuit)),
            };
            out.push_str(&serde_json::to_string(&line).expect("job lines serialize"));
            out.push('\n');
        }
        out
    }

    /// Parses JSON lines. A circuit is given inline or as a QASM/JSON file
    /// path relative to `base_dir`.
    pub fn from_jsonl(text: &str, base_dir: &Path, seed: u64) -> Result<Self, SimError> {
        let mut jobs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let parsed: JobLine = serde_json::from_str(line)
                .map_err(|e| SimError::InvalidWorkload(format!("line {}: {e}", i + 1)))?;
            let circuit = match parsed.circuit {
                CircuitRef::Inline(c) => c.into_circuit()?,
                CircuitRef::File(file) => {
                    let path = base_dir.join(&file);
                    let src = std::fs::read_to_string(&path).map_err(|e| {
                        SimError::InvalidWorkload(format!("line {}: cannot read {}: {e}", i + 1, path.display()))
                    })?;
                    let format = if file.ends_with(".json") { CircuitFormat::Json } else { CircuitFormat::Qasm };
                    parse_circuit(&src, format)?
                }
            };
            jobs.push(Job::new(JobId(parsed.id), circuit, parsed.shots, parsed.t)?);
        }
        Workload::from_jobs(jobs, seed)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct JobLine {
    id: u64,
    #[serde(alias = "submit_time")]
    t: f64,
    shots: u64,
    circuit: CircuitRef,
}

/// Inline JSON circuit or a path to a QASM/JSON file.
#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum CircuitRef {
    Inline(CircuitJson),
    File(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShotProfile {
    /// Shots in [1000, 20000].
    NoiseModel,
    /// Shots in [500, 10000].
    Device,
}

impl ShotProfile {
    pub fn range(&self) -> (u64, u64) {
        match self {
            ShotProfile::NoiseModel => (1000, 20000),
            ShotProfile::Device => (500, 10000),
        }
    }
}

impl FromStr for ShotProfile {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "noise-model" => Ok(ShotProfile::NoiseModel),
            "device" => Ok(ShotProfile::Device),
            other => Err(ConfigError::Invalid(format!(
                "unknown shot profile `{other}` (expected noise-model or device)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorkloadParams {
    pub initial_jobs: usize,
    pub arrivals: usize,
    pub shots: (u64, u64),
    pub min_width: usize,
    pub max_width: usize,
}

impl Default for WorkloadParams {
    fn default() -> Self {
        WorkloadParams {
            initial_jobs: 44,
            arrivals: 400,
            shots: ShotProfile::NoiseModel.range(),
            min_width: 3,
            max_width: 16,
        }
    }
}

impl WorkloadParams {
    pub fn with_profile(profile: ShotProfile) -> Self {
        WorkloadParams {
            shots: profile.range(),
            ..Default::default()
        }
    }

    /// Caps circuit width so every job fits within an `eta` share of the device.
    pub fn fitted_to(mut self, hw: &HardwareModel, eta: f64) -> Self {
        let cap = (eta * hw.num_qubits() as f64 + 1e-9).floor() as usize;
        self.max_width = self.max_width.min(cap).max(self.min_width.min(cap));
        self.min_width = self.min_width.min(self.max_width);
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let (lo, hi) = self.shots;
        if lo == 0 || lo > hi {
            return Err(ConfigError::Invalid(format!("invalid shot range [{lo}, {hi}]")));
        }
        if self.min_width < 2 || self.min_width > self.max_width {
            return Err(ConfigError::Invalid(format!(
                "invalid width range [{}, {}]",
                self.min_width, self.max_width
            )));
        }
        Ok(())
    }
}

const MAX_DEPTH: usize = 100;
const TWO_QUBIT_FRACTION: f64 = 0.37;

/// Random benchmark-like circuit: width skewed towards small values, a
/// lognormal gate count around 70, about a third CX gates biased towards
/// neighbouring logical qubits, depth at most 100, full readout.
pub fn synthetic_circuit<R: Rng + ?Sized>(rng: &mut R, min_width: usize, max_width: usize) -> Circuit {
    let width_tail = Exp::new(1.0_f64 / 3.5).expect("positive rate");
    let n = loop {
        let w = min_width + width_tail.sample(rng).floor() as usize;
        if w <= max_width {
            break w;
        }
    };
    let count_dist = LogNormal::new(58f64.ln(), 0.6).expect("valid lognormal");
    let target = (count_dist.sample(rng).round() as usize).clamp(7, 391);

    let mut c = Circuit::empty(n);
    let mut depth = vec![0usize; n];
    for _ in 0..target {
        let gate = if rng.random_bool(TWO_QUBIT_FRACTION) {
            let a = rng.random_range(0..n);
            let b = if rng.random_bool(0.7) {
                if a + 1 < n && (a == 0 || rng.random_bool(0.5)) {
                    a + 1
                } else {
                    a - 1
                }
            } else {
                (a + rng.random_range(1..n)) % n
            };
            GateOp::cx(a, b)
        } else {
            let q = rng.random_range(0..n);
            match rng.random_range(0..3) {
                0 => GateOp::x(q),
                1 => GateOp::sx(q),
                _ => GateOp::rz(rng.random_range(-std::f64::consts::PI..std::f64::consts::PI), q),
            }
        };
        let level = gate.qubits.iter().map(|&q| depth[q]).max().unwrap_or(0) + 1;
        if level > MAX_DEPTH - 1 {
            break;
        }
        for &q in &gate.qubits {
            depth[q] = level;
        }
        c.push(gate).expect("generated gates are valid");
    }
    for q in 0..n {
        c.push(GateOp::measure(q)).expect("valid measure");
    }
    c
}

/// Initial jobs at time 0 followed by arrivals starting at time 1 whose
/// gaps are 0 or 1 second with equal probability.
pub fn generate_workload(params: &WorkloadParams, seed: u64) -> Result<Workload, ConfigError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = params.shots;
    let mut next_id = 0u64;
    let mut make = |rng: &mut ChaCha8Rng, t: f64| {
        let circuit = synthetic_circuit(rng, params.min_width, params.max_width);
        let shots = rng.random_range(lo..=hi);
        let job = Job::new(JobId(next_id), circuit, shots, t).expect("generated jobs are valid");
        next_id += 1;
        job
    };
    let initial = (0..params.initial_jobs).map(|_| make(&mut rng, 0.0)).collect();
    let mut t = 1.0;
    let mut arrivals = Vec::with_capacity(params.arrivals);
    for i in 0..params.arrivals {
        if i > 0 && rng.random_bool(0.5) {
            t += 1.0;
        }
        arrivals.push(make(&mut rng, t));
    }
    Ok(Workload { initial, arrivals, seed })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobRecord {
    pub id: JobId,
    pub submit: f64,
    pub start: f64,
    pub complete: f64,
    pub tat: f64,
    pub width: usize,
    pub shots: u64,
    pub epst_star: f64,
    pub round: usize,
    pub partition: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub index: usize,
    pub start: f64,
    pub end: f64,
    pub shots: u64,
    pub t_c_ns: f64,
    /// Selected jobs in selection order.
    pub jobs: Vec<JobId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub qpu_time: f64,
    pub tat_max: f64,
    pub tat_avg: f64,
    /// Population standard deviation.
    pub tat_std: f64,
    pub trf: f64,
    pub estimated_pst_avg: f64,
    pub rounds: usize,
    pub makespan: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub policy: Policy,
    pub seed: u64,
    #[serde(flatten)]
    pub metrics: Metrics,
    /// Wall-clock seconds spent ordering queues and assembling rounds.
    pub scheduler_runtime: f64,
    pub jobs: Vec<JobRecord>,
    pub round_log: Vec<RoundRecord>,
}

impl RunReport {
    pub fn selection_order(&self) -> Vec<JobId> {
        self.round_log.iter().flat_map(|r| r.jobs.iter().copied()).collect()
    }

    /// Per-job CSV.
    pub fn jobs_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["id", "submit", "start", "complete", "tat", "width", "shots", "epst_star", "round", "partition"])?;
        for j in &self.jobs {
            let partition = j.partition.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(" ");
            w.write_record([
                j.id.to_string(),
                j.submit.to_string(),
                j.start.to_string(),
                j.complete.to_string(),
                j.tat.to_string(),
                j.width.to_string(),
                j.shots.to_string(),
                j.epst_star.to_string(),
                j.round.to_string(),
                partition,
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Aggregate metrics. TRF is the ratio of requested shots to executed round
/// shots, both summed as integers.
pub fn compute_metrics(jobs: &[JobRecord], rounds: &[RoundRecord], time: &TimeModel) -> Metrics {
    let round_shots: u64 = rounds.iter().map(|r| r.shots).sum();
    let job_shots: u64 = jobs.iter().map(|j| j.shots).sum();
    let n = jobs.len().max(1) as f64;
    let tat_avg = jobs.iter().map(|j| j.tat).sum::<f64>() / n;
    let var = jobs.iter().map(|j| (j.tat - tat_avg).powi(2)).sum::<f64>() / n;
    Metrics {
        qpu_time: rounds.iter().map(|r| time.execution_time(r.shots)).sum(),
        tat_max: jobs.iter().map(|j| j.tat).fold(0.0, f64::max),
        tat_avg,
        tat_std: var.sqrt(),
        trf: if round_shots == 0 { 1.0 } else { job_shots as f64 / round_shots as f64 },
        estimated_pst_avg: jobs.iter().map(|j| j.epst_star).sum::<f64>() / n,
        rounds: rounds.len(),
        makespan: rounds.iter().map(|r| r.end).fold(0.0, f64::max),
    }
}

fn limits(policy: Policy, hw: &HardwareModel, cfg: &SchedulerConfig) -> RoundLimits {
    match policy {
        Policy::Fifo => RoundLimits::serial(hw),
        Policy::FifoP => RoundLimits::whole_device(hw),
        Policy::Naqjs => RoundLimits::eta(hw, cfg.eta),
    }
}

/// Rejects jobs that could not run even on an otherwise idle device.
pub fn check_schedulable(workload: &Workload, hw: &HardwareModel, policy: Policy, cfg: &SchedulerConfig) -> Result<(), SimError> {
    let lim = limits(policy, hw, cfg);
    let idle = RemainingGraph::full(hw);
    for job in workload.jobs() {
        let reason = if !lim.admits(0, job.width()) {
            Some(format!(
                "width exceeds the per-round budget of {:.2} qubits",
                lim.qubit_budget
            ))
        } else if best_partition(&job.circuit, &idle, hw).is_none() {
            Some(format!("no connected {}-qubit region on {}", job.width(), hw.name))
        } else {
            None
        };
        if let Some(reason) = reason {
            return Err(SimError::Unschedulable {
                id: job.id,
                width: job.width(),
                reason,
            });
        }
    }
    Ok(())
}

/// Replays `workload` under `policy`.
///
/// At each decision point the queue holds every unfinished job submitted by
/// then; one round is assembled and the clock advances to its end. An idle
/// device jumps to the next arrival.
pub fn simulate(
    workload: &Workload,
    hw: &HardwareModel,
    policy: Policy,
    cfg: &SchedulerConfig,
    time: &TimeModel,
    seed: u64,
) -> Result<RunReport, SimError> {
    cfg.validate()?;
    time.validate()?;
    check_schedulable(workload, hw, policy, cfg)?;
    let lim = limits(policy, hw, cfg);

    let mut arrivals = workload.arrivals.iter().peekable();
    let mut queue: Vec<&Job> = workload.initial.iter().collect();
    let mut now = 0.0_f64;
    let mut runtime = 0.0_f64;
    let mut jobs = Vec::with_capacity(workload.len());
    let mut round_log: Vec<RoundRecord> = Vec::new();

    loop {
        while let Some(j) = arrivals.next_if(|j| j.submit_time <= now) {
            queue.push(j);
        }
        if queue.is_empty() {
            match arrivals.peek() {
                Some(j) => {
                    now = j.submit_time;
                    continue;
                }
                None => break,
            }
        }
        let clock = Instant::now();
        let (round, _skipped) = match policy {
            Policy::Naqjs => {
                let sorted = rearrange(&queue, cfg, now);
                fill_round(sorted.iter().map(|e| e.job), hw, cfg, lim, now, time, seed)?
            }
            Policy::Fifo | Policy::FifoP => fill_round(fifo_order(&queue), hw, cfg, lim, now, time, seed)?,
        };
        runtime += clock.elapsed().as_secs_f64();
        let Some(round) = round else {
            // Unreachable for validated workloads: the head of the queue
            // always fits on an idle device.
            return Err(SimError::InvalidWorkload(format!(
                "no job in a queue of {} could be placed at t = {now}",
                queue.len()
            )));
        };
        record_round(&round, round_log.len(), &mut jobs, &mut round_log);
        let done: HashSet<JobId> = round.selected.iter().map(|s| s.id).collect();
        queue.retain(|j| !done.contains(&j.id));
        debug!(
            "{policy} round {} at {now:.1}s: {} jobs, {} shots, queue {}",
            round_log.len(),
            done.len(),
            round.shots,
            queue.len()
        );
        now = round.end_time;
    }

    jobs.sort_by_key(|j: &JobRecord| j.id);
    let metrics = compute_metrics(&jobs, &round_log, time);
    Ok(RunReport {
        policy,
        seed,
        metrics,
        scheduler_runtime: runtime,
        jobs,
        round_log,
    })
}

fn record_round(round: &ExecutionRound, index: usize, jobs: &mut Vec<JobRecord>, log: &mut Vec<RoundRecord>) {
    for s in &round.selected {
        jobs.push(JobRecord {
            id: s.id,
            submit: s.submit_time,
            start: round.start_time,
            complete: round.end_time,
            tat: round.end_time - s.submit_time,
            width: s.width,
            shots: s.shots,
            epst_star: s.epst_star,
            round: index,
            partition: s.partition.qubits.clone(),
        });
    }
    log.push(RoundRecord {
        index,
        start: round.start_time,
        end: round.end_time,
        shots: round.shots,
        t_c_ns: round.t_c_ns,
        jobs: round.selected.iter().map(|s| s.id).collect(),
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardware::{builtin_topology, Topology};

    fn small_job(id: u64, shots: u64, t: f64) -> Job {
        let c = Circuit::new(3, vec![GateOp::cx(0, 1), GateOp::cx(1, 2), GateOp::measure(0), GateOp::measure(1), GateOp::measure(2)]).unwrap();
        Job::new(JobId(id), c, shots, t).unwrap()
    }

    #[test]
    fn workload_is_reproducible_and_in_range() {
        let p = WorkloadParams::default();
        let a = generate_workload(&p, 7).unwrap();
        let b = generate_workload(&p, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.initial.len(), 44);
        assert_eq!(a.arrivals.len(), 400);
        assert!(a.jobs().all(|j| (1000..=20000).contains(&j.shots)));
        assert!(a.initial.iter().all(|j| j.submit_time == 0.0));
        for w in a.arrivals.windows(2) {
            let gap = w[1].submit_time - w[0].submit_time;
            assert!(gap == 0.0 || gap == 1.0);
        }
        assert_ne!(a, generate_workload(&p, 8).unwrap());
    }

    #[test]
    fn synthetic_statistics_look_like_benchmarks() {
        let w = generate_workload(&WorkloadParams::default(), 3).unwrap();
        let n = w.len() as f64;
        let mean_width = w.jobs().map(|j| j.width()).sum::<usize>() as f64 / n;
        let mean_gates = w.jobs().map(|j| j.circuit.len() - j.width()).sum::<usize>() as f64 / n;
        assert!((4.5..8.0).contains(&mean_width), "{mean_width}");
        assert!((50.0..90.0).contains(&mean_gates), "{mean_gates}");
        assert!(w.jobs().all(|j| j.circuit.depth() <= 100 && (3..=16).contains(&j.width())));
    }

    #[test]
    fn device_profile_shots() {
        let w = generate_workload(&WorkloadParams::with_profile(ShotProfile::Device), 1).unwrap();
        assert!(w.jobs().all(|j| (500..=10000).contains(&j.shots)));
    }

    #[test]
    fn fitted_params_cap_width() {
        let hw = builtin_topology(Topology::Ring16);
        let p = WorkloadParams::default().fitted_to(&hw, 5.0 / 6.0);
        assert_eq!(p.max_width, 13);
        let w = generate_workload(&p, 2).unwrap();
        assert!(w.jobs().all(|j| j.width() <= 13));
    }

    #[test]
    fn fifo_qpu_time_is_serial_sum() {
        let hw = builtin_topology(Topology::Ring16);
        let w = Workload::from_jobs(vec![small_job(0, 1000, 0.0), small_job(1, 2000, 0.0)], 0).unwrap();
        let r = simulate(&w, &hw, Policy::Fifo, &SchedulerConfig::default(), &TimeModel::default(), 0).unwrap();
        assert!((r.metrics.qpu_time - 0.6).abs() < 1e-12);
        assert_eq!(r.metrics.trf, 1.0);
        assert_eq!(r.metrics.rounds, 2);
    }

    #[test]
    fn single_job_turnaround() {
        let hw = builtin_topology(Topology::Ring16);
        let w = Workload::from_jobs(vec![small_job(0, 5000, 0.0)], 0).unwrap();
        for policy in Policy::ALL {
            let r = simulate(&w, &hw, policy, &SchedulerConfig::default(), &TimeModel::default(), 0).unwrap();
            assert!((r.jobs[0].tat - (5000.0 * 200e-6 + 10.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn idle_device_waits_for_arrival() {
        let hw = builtin_topology(Topology::Ring16);
        let w = Workload::from_jobs(vec![small_job(0, 1000, 0.0), small_job(1, 1000, 100.0)], 0).unwrap();
        let r = simulate(&w, &hw, Policy::Naqjs, &SchedulerConfig::default(), &TimeModel::default(), 0).unwrap();
        assert_eq!(r.jobs[1].start, 100.0);
        assert!(r.jobs.iter().all(|j| j.complete >= j.submit));
    }

    #[test]
    fn trf_two_round_example() {
        let rec = |id, shots, round| JobRecord {
            id: JobId(id),
            submit: 0.0,
            start: 0.0,
            complete: 1.0,
            tat: 1.0,
            width: 3,
            shots,
            epst_star: 0.5,
            round,
            partition: vec![],
        };
        let round = |index, shots| RoundRecord {
            index,
            start: 0.0,
            end: 1.0,
            shots,
            t_c_ns: 0.0,
            jobs: vec![],
        };
        let jobs = [rec(0, 1000, 0), rec(1, 1000, 0), rec(2, 500, 1), rec(3, 500, 1)];
        let m = compute_metrics(&jobs, &[round(0, 1000), round(1, 500)], &TimeModel::default());
        assert_eq!(m.trf, 2.0);
        assert_eq!(m.tat_std, 0.0);
    }

    #[test]
    fn unschedulable_job_is_named() {
        let hw = builtin_topology(Topology::Ring16);
        let c = Circuit::new(16, vec![GateOp::cx(0, 1)]).unwrap();
        let w = Workload::from_jobs(vec![Job::new(JobId(42), c, 100, 0.0).unwrap()], 0).unwrap();
        let err = simulate(&w, &hw, Policy::Naqjs, &SchedulerConfig::default(), &TimeModel::default(), 0).unwrap_err();
        assert!(matches!(err, SimError::Unschedulable { id: JobId(42), .. }));
        assert!(simulate(&w, &hw, Policy::FifoP, &SchedulerConfig::default(), &TimeModel::default(), 0).is_ok());
    }

    #[test]
    fn jsonl_round_trip() {
        let w = generate_workload(
            &WorkloadParams {
                initial_jobs: 3,
                arrivals: 5,
                ..Default::default()
            },
            4,
        )
        .unwrap();
        let back = Workload::from_jsonl(&w.to_jsonl(), Path::new("."), 4).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn jsonl_file_references() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("a.qasm"), "OPENQASM 2.0;\nqreg q[2];\ncx q[0],q[1];\n").unwrap();
        let text = "{\"id\":1,\"t\":0,\"shots\":10,\"circuit\":\"a.qasm\"}\n";
        let w = Workload::from_jsonl(text, dir.path(), 0).unwrap();
        assert_eq!(w.initial[0].width(), 2);
        let bad = "{\"id\":1,\"t\":0,\"shots\":10}\n";
        assert!(Workload::from_jsonl(bad, dir.path(), 0).is_err());
        let dup = format!("{text}{text}");
        assert!(Workload::from_jsonl(&dup, dir.path(), 0).is_err());
    }

    #[test]
    fn policy_names_parse() {
        for p in Policy::ALL {
            assert_eq!(p.name().parse::<Policy>().unwrap(), p);
        }
        assert!("lifo".parse::<Policy>().is_err());
    }
}
