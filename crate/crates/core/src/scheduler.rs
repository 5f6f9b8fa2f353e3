//! Priority scoring, queue rearranging and execution-round assembly.

use std::cmp::Ordering;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{circuit_time, Job, JobId};
use crate::error::{ConfigError, SimError};
use crate::fidelity::epst_star_at;
use crate::hardware::HardwareModel;
use crate::mapper::{initial_mapping, MapperConfig, Mapping, RoutedCircuit, RoutingOptions};
use crate::partition::{best_partition, Partition, RemainingGraph};
use crate::sim::TimeModel;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SchedulerConfig {
    /// Width weight.
    pub alpha: f64,
    /// Shot weight.
    pub beta: f64,
    /// Submission-time weight.
    pub gamma: f64,
    /// Maximum fraction of the device a round may occupy.
    pub eta: f64,
    /// Aging period in seconds.
    pub delta_t: f64,
    /// Refinement iterations of the initial mapping search.
    pub repeats: usize,
    pub aging: bool,
    pub routing: RoutingOptions,
}

impl Default for SchedulerConfig {
    fn default() -> Self {
        SchedulerConfig {
            alpha: 6.0,
            beta: 4.5,
            gamma: 1.0,
            eta: 5.0 / 6.0,
            delta_t: 360.0,
            repeats: 3,
            aging: true,
            routing: RoutingOptions::default(),
        }
    }
}

impl SchedulerConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(ConfigError::Invalid(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(ConfigError::Invalid(format!("eta must lie in (0, 1], got {}", self.eta)));
        }
        if !(self.delta_t.is_finite() && self.delta_t > 0.0) {
            return Err(ConfigError::Invalid(format!("delta_t must be > 0, got {}", self.delta_t)));
        }
        if self.repeats == 0 {
            return Err(ConfigError::Invalid("repeats must be >= 1".into()));
        }
        Ok(())
    }

    pub fn mapper(&self) -> MapperConfig {
        MapperConfig {
            repeats: self.repeats,
            routing: self.routing,
        }
    }

    /// Time after submission past which a job outranks every fresh job.
    pub fn liveness_bound(&self) -> f64 {
        (self.alpha + self.beta + self.gamma + 1.0) * self.delta_t
    }
}

/// Min/max of width, shots and submission time over a queue snapshot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueueStats {
    pub width: (f64, f64),
    pub shots: (f64, f64),
    pub submit: (f64, f64),
}

impl QueueStats {
    pub fn of<'a>(jobs: impl IntoIterator<Item = &'a Job>) -> Option<Self> {
        let mut it = jobs.into_iter();
        let first = it.next()?;
        let point = |j: &Job| (j.width() as f64, j.shots as f64, j.submit_time);
        let (n, s, t) = point(first);
        let mut stats = QueueStats {
            width: (n, n),
            shots: (s, s),
            submit: (t, t),
        };
        for j in it {
            let (n, s, t) = point(j);
            stats.width = (stats.width.0.min(n), stats.width.1.max(n));
            stats.shots = (stats.shots.0.min(s), stats.shots.1.max(s));
            stats.submit = (stats.submit.0.min(t), stats.submit.1.max(t));
        }
        Some(stats)
    }
}

fn normalise(x: f64, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        (x - lo) / (hi - lo)
    } else {
        0.0
    }
}

const AGING_EPS: f64 = 1e-9;

/// `floor((now - t_i) / delta_t)`, or 0 with aging disabled. A waiting time
/// that is a whole number of periods up to rounding earns the full period.
pub fn aging_bonus(job: &Job, cfg: &SchedulerConfig, now: f64) -> i64 {
    if !cfg.aging || now <= job.submit_time {
        return 0;
    }
    ((now - job.submit_time) / cfg.delta_t + AGING_EPS).floor() as i64
}

/// `-alpha S_n - beta S_s - gamma S_t` plus the aging bonus, with each `S`
/// min-max normalised over the queue.
pub fn priority_score(job: &Job, stats: &QueueStats, cfg: &SchedulerConfig, now: f64) -> f64 {
    let s_n = normalise(job.width() as f64, stats.width);
    let s_s = normalise(job.shots as f64, stats.shots);
    let s_t = normalise(job.submit_time, stats.submit);
    -cfg.alpha * s_n - cfg.beta * s_s - cfg.gamma * s_t + aging_bonus(job, cfg, now) as f64
}

#[derive(Debug, Clone, Copy)]
pub struct QueueEntry<'a> {
    pub job: &'a Job,
    pub priority: f64,
    pub aging_bonus: i64,
}

/// Queue sorted by descending priority; ties by submission time, then id.
pub fn rearrange<'a>(queue: &[&'a Job], cfg: &SchedulerConfig, now: f64) -> Vec<QueueEntry<'a>> {
    let Some(stats) = QueueStats::of(queue.iter().copied()) else {
        return Vec::new();
    };
    let mut entries: Vec<QueueEntry> = queue
        .iter()
        .map(|&job| QueueEntry {
            job,
            priority: priority_score(job, &stats, cfg, now),
            aging_bonus: aging_bonus(job, cfg, now),
        })
        .collect();
    entries.sort_by(|a, b| {
        b.priority
            .total_cmp(&a.priority)
            .then(a.job.submit_time.total_cmp(&b.job.submit_time))
            .then(a.job.id.cmp(&b.job.id))
    });
    entries
}

/// Submission order, ties by id.
pub fn fifo_order<'a>(queue: &[&'a Job]) -> Vec<&'a Job> {
    let mut out = queue.to_vec();
    out.sort_by(|a, b| match a.submit_time.total_cmp(&b.submit_time) {
        Ordering::Equal => a.id.cmp(&b.id),
        o => o,
    });
    out
}

/// Capacity of one round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundLimits {
    /// Upper bound on the summed width of selected jobs.
    pub qubit_budget: f64,
    pub max_jobs: Option<usize>,
}

impl RoundLimits {
    pub fn eta(hw: &HardwareModel, eta: f64) -> Self {
        RoundLimits {
            qubit_budget: eta * hw.num_qubits() as f64,
            max_jobs: None,
        }
    }

    pub fn whole_device(hw: &HardwareModel) -> Self {
        Self::eta(hw, 1.0)
    }

    pub fn serial(hw: &HardwareModel) -> Self {
        RoundLimits {
            max_jobs: Some(1),
            ..Self::whole_device(hw)
        }
    }

    pub fn admits(&self, used: usize, width: usize) -> bool {
        (used + width) as f64 <= self.qubit_budget + 1e-9
    }
}

/// A job placed in a round.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduledJob {
    pub id: JobId,
    pub width: usize,
    pub shots: u64,
    pub submit_time: f64,
    pub partition: Partition,
    pub mapping: Mapping,
    pub routed: RoutedCircuit,
    /// EPST* at the round's aligned circuit time.
    pub epst_star: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExecutionRound {
    pub selected: Vec<ScheduledJob>,
    pub shots: u64,
    /// Longest routed circuit in the round; all circuits are aligned to it.
    pub t_c_ns: f64,
    pub start_time: f64,
    pub end_time: f64,
}

impl ExecutionRound {
    pub fn width(&self) -> usize {
        self.selected.iter().map(|j| j.width).sum()
    }
}

/// Seed for mapping a given job, so its placement does not depend on what
/// else shares the round.
pub fn job_seed(run_seed: u64, id: JobId) -> u64 {
    run_seed ^ id.0.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Walks `ordered` and selects jobs whose width fits the remaining budget
/// and for which a partition exists on the qubits still free; unfit jobs
/// are skipped. Selected circuits are mapped and aligned to finish together.
/// Returns `None` if nothing fits, plus the ids of skipped jobs.
pub fn fill_round<'a>(
    ordered: impl IntoIterator<Item = &'a Job>,
    hw: &HardwareModel,
    cfg: &SchedulerConfig,
    limits: RoundLimits,
    now: f64,
    time: &TimeModel,
    seed: u64,
) -> Result<(Option<ExecutionRound>, Vec<JobId>), SimError> {
    let mapper = cfg.mapper();
    let mut remaining = RemainingGraph::full(hw);
    let mut used = 0usize;
    let mut placed = Vec::new();
    let mut skipped = Vec::new();
    for job in ordered {
        let full = limits.max_jobs.is_some_and(|m| placed.len() >= m)
            || !limits.admits(used, 1)
            || remaining.is_empty();
        if full || !limits.admits(used, job.width()) {
            skipped.push(job.id);
            continue;
        }
        let Some(partition) = best_partition(&job.circuit, &remaining, hw) else {
            skipped.push(job.id);
            continue;
        };
        let mut rng = ChaCha8Rng::seed_from_u64(job_seed(seed, job.id));
        let outcome = initial_mapping(&job.circuit, &partition.qubits, hw, &mapper, &mut rng)?;
        remaining.allocate(&partition.qubits);
        used += job.width();
        placed.push((job, partition, outcome));
    }
    if placed.is_empty() {
        return Ok((None, skipped));
    }

    let mut t_c_ns = 0.0_f64;
    for (_, _, o) in &placed {
        t_c_ns = t_c_ns.max(circuit_time(&o.routed.circuit, &hw.cal.durations)?);
    }
    let shots = placed.iter().map(|(j, _, _)| j.shots).max().unwrap_or(0);
    let mut selected = Vec::with_capacity(placed.len());
    for (job, partition, o) in placed {
        let epst = epst_star_at(&o.routed.circuit, &o.mapping, hw, t_c_ns)?.epst_star;
        selected.push(ScheduledJob {
            id: job.id,
            width: job.width(),
            shots: job.shots,
            submit_time: job.submit_time,
            partition,
            mapping: o.mapping,
            routed: o.routed,
            epst_star: epst,
        });
    }
    Ok((
        Some(ExecutionRound {
            selected,
            shots,
            t_c_ns,
            start_time: now,
            end_time: now + time.round_duration(shots),
        }),
        skipped,
    ))
}

/// Assembles an NAQJS round from a rearranged queue under the eta budget.
pub fn assemble_round(
    sorted: &[QueueEntry<'_>],
    hw: &HardwareModel,
    cfg: &SchedulerConfig,
    now: f64,
    time: &TimeModel,
    seed: u64,
) -> Result<(Option<ExecutionRound>, Vec<JobId>), SimError> {
    fill_round(
        sorted.iter().map(|e| e.job),
        hw,
        cfg,
        RoundLimits::eta(hw, cfg.eta),
        now,
        time,
        seed,
    )
}
