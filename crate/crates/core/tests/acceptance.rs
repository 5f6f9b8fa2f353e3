//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::time::Instant;

use naqjs::circuit::{circuit_time, expand_composites, Circuit, GateDurations, GateKind, GateOp, Job, JobId};
use naqjs::fidelity::{dephasing_time, epst_star_at};
use naqjs::hardware::{builtin_topology, builtin_topology_seeded, Calibration, CouplingGraph, HardwareModel, Topology};
use naqjs::mapper::{initial_mapping, route, MapperConfig, Mapping, RoutingOptions};
use naqjs::oracle::equivalent_under_permutation;
use naqjs::scheduler::{priority_score, QueueStats};
use naqjs::sim::{compute_metrics, generate_workload, simulate, synthetic_circuit, JobRecord, Policy, RoundRecord, RunReport, ShotProfile, TimeModel, Workload, WorkloadParams};
use naqjs::SchedulerConfig;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

// ---------------------------------------------------------------- helpers

fn random_graph(rng: &mut ChaCha8Rng) -> CouplingGraph {
    let n = rng.random_range(4..=16);
    let mut edges = BTreeSet::new();
    for i in 1..n {
        let j = rng.random_range(0..i);
        edges.insert((j, i));
    }
    let extra = rng.random_range(0..=n);
    for _ in 0..extra {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    CouplingGraph::new(n, edges).expect("connected by construction")
}

/// A device with per-location calibration drawn around typical values.
fn random_device(rng: &mut ChaCha8Rng) -> HardwareModel {
    match rng.random_range(0..4) {
        0 => builtin_topology_seeded(Topology::Ring16, rng.random()),
        1 => builtin_topology_seeded(Topology::Grid66, rng.random()),
        _ => {
            let graph = random_graph(rng);
            let n = graph.num_qubits();
            let t1: Vec<f64> = (0..n).map(|_| rng.random_range(15.0..60.0)).collect();
            let cal = Calibration {
                r_1q: (0..n).map(|_| rng.random_range(0.99..1.0)).collect(),
                r_2q: graph.edges().iter().map(|&e| (e, rng.random_range(0.85..0.995))).collect(),
                r_ro: (0..n).map(|_| rng.random_range(0.9..0.99)).collect(),
                t2_us: t1.iter().map(|&t| rng.random_range(0.5 * t..1.5 * t)).collect(),
                t1_us: t1,
                durations: GateDurations::default(),
            };
            HardwareModel::new("random", graph, cal).expect("valid calibration")
        }
    }
}

/// Random connected subset of `size` device qubits.
fn random_partition(hw: &HardwareModel, size: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let start = rng.random_range(0..hw.num_qubits());
    let mut chosen = BTreeSet::from([start]);
    while chosen.len() < size {
        let frontier: Vec<usize> = chosen
            .iter()
            .flat_map(|&q| hw.graph.neighbors(q).iter().copied())
            .filter(|q| !chosen.contains(q))
            .collect();
        chosen.insert(*frontier.choose(rng).expect("connected device"));
    }
    chosen.into_iter().collect()
}

/// Random circuit over the supported gate set, ending in full readout.
fn random_circuit(n: usize, len: usize, rng: &mut ChaCha8Rng) -> Circuit {
    let mut gates = Vec::with_capacity(len + n);
    for _ in 0..len {
        let a = rng.random_range(0..n);
        let mut b = rng.random_range(0..n);
        while n > 1 && b == a {
            b = rng.random_range(0..n);
        }
        let g = match rng.random_range(0..10) {
            0 => GateOp::x(a),
            1 => GateOp::sx(a),
            2 | 3 => GateOp::rz(rng.random_range(-3.2..3.2), a),
            4 if n > 1 => GateOp::cz(a, b),
            _ if n > 1 => GateOp::cx(a, b),
            _ => GateOp::sx(a),
        };
        gates.push(g);
    }
    gates.extend((0..n).map(GateOp::measure));
    Circuit::new(n, gates).expect("valid gates")
}

fn random_mapping(partition: &[usize], rng: &mut ChaCha8Rng) -> Mapping {
    let mut image = partition.to_vec();
    image.shuffle(rng);
    Mapping::new(image).expect("distinct qubits")
}

fn random_options(rng: &mut ChaCha8Rng) -> RoutingOptions {
    RoutingOptions {
        allow_bridge: rng.random_bool(0.7),
        noise_aware: rng.random_bool(0.7),
        ..RoutingOptions::default()
    }
}

fn noise_workload(hw: &HardwareModel, eta: f64, seed: u64) -> Workload {
    let params = WorkloadParams::with_profile(ShotProfile::NoiseModel).fitted_to(hw, eta);
    generate_workload(&params, seed).expect("valid params")
}

fn run(w: &Workload, hw: &HardwareModel, policy: Policy, cfg: &SchedulerConfig, seed: u64) -> RunReport {
    simulate(w, hw, policy, cfg, &TimeModel::default(), seed).expect("schedulable workload")
}

fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(f64::MIN_POSITIVE)
}

// ---------------------------------------------------------------- criteria

fn routing_legality() -> Outcome {
    const CASES: usize = 1000;
    let failures: Vec<String> = (0..CASES as u64)
        .into_par_iter()
        .filter_map(|case| {
            let mut rng = ChaCha8Rng::seed_from_u64(10_000 + case);
            let hw = random_device(&mut rng);
            let n = rng.random_range(2..=hw.num_qubits().min(12));
            let partition = random_partition(&hw, n, &mut rng);
            let len = rng.random_range(5..120);
            let circuit = random_circuit(n, len, &mut rng);
            let mapping = random_mapping(&partition, &mut rng);
            let opts = random_options(&mut rng);
            let routed = match route(&circuit, &partition, &mapping, &hw, &opts) {
                Ok(r) => r,
                Err(e) => return Some(format!("case {case}: {e}")),
            };
            let inside: BTreeSet<usize> = partition.iter().copied().collect();
            let expanded = expand_composites(&routed.circuit);
            let bad = expanded.gates().iter().find(|g| {
                let off_edge = g.kind.is_two_qubit_gate() && !hw.graph.has_edge(g.qubits[0], g.qubits[1]);
                off_edge || g.qubits.iter().any(|q| !inside.contains(q))
            });
            bad.map(|g| format!("case {case}: {:?} on {:?}", g.kind, g.qubits))
        })
        .collect();
    let detail = match failures.first() {
        None => format!("{CASES}/{CASES} routed circuits legal"),
        Some(f) => format!("{} illegal, first: {f}", failures.len()),
    };
    Outcome::new(failures.is_empty(), detail)
}

fn routing_semantics() -> Outcome {
    const CASES: usize = 300;
    let failures: Vec<String> = (0..CASES as u64)
        .into_par_iter()
        .filter_map(|case| {
            let mut rng = ChaCha8Rng::seed_from_u64(20_000 + case);
            let hw = random_device(&mut rng);
            let n = rng.random_range(2..=hw.num_qubits().min(8));
            let partition = random_partition(&hw, n, &mut rng);
            let len = rng.random_range(5..80);
            let circuit = random_circuit(n, len, &mut rng);
            let routed = if case % 2 == 0 {
                let mapping = random_mapping(&partition, &mut rng);
                route(&circuit, &partition, &mapping, &hw, &random_options(&mut rng))
            } else {
                let cfg = MapperConfig {
                    repeats: rng.random_range(1..=3),
                    routing: random_options(&mut rng),
                };
                initial_mapping(&circuit, &partition, &hw, &cfg, &mut rng).map(|o| o.routed)
            };
            match routed.map_err(|e| e.to_string()).and_then(|r| {
                equivalent_under_permutation(&circuit, &r, 1e-6).map_err(|e| e.to_string())
            }) {
                Ok(true) => None,
                Ok(false) => Some(format!("case {case}: not equivalent")),
                Err(e) => Some(format!("case {case}: {e}")),
            }
        })
        .collect();
    let detail = match failures.first() {
        None => format!("{CASES}/{CASES} routed circuits equivalent at tol 1e-6"),
        Some(f) => format!("{} failures, first: {f}", failures.len()),
    };
    Outcome::new(failures.is_empty(), detail)
}

/// Per-qubit clocks advanced by a linear scan of the gate list.
fn linear_scan_time(c: &Circuit, d: &GateDurations) -> f64 {
    fn step(clock: &mut [f64], qubits: &[usize], dur: f64) {
        let start = qubits.iter().map(|&q| clock[q]).fold(0.0, f64::max);
        for &q in qubits {
            clock[q] = start + dur;
        }
    }
    let mut clock = vec![0.0; c.num_qubits()];
    for g in c.gates() {
        let q = &g.qubits;
        match (g.kind, g.duration_ns) {
            (_, Some(dur)) => step(&mut clock, q, dur),
            (GateKind::Swap, None) => {
                for _ in 0..3 {
                    step(&mut clock, q, d.two_qubit_ns);
                }
            }
            (GateKind::Bridge, None) => {
                let (c_, m, t) = (q[0], q[1], q[2]);
                for pair in [[m, t], [c_, m], [m, t], [c_, m]] {
                    step(&mut clock, &pair, d.two_qubit_ns);
                }
            }
            (GateKind::Cx | GateKind::Cz, None) => step(&mut clock, q, d.two_qubit_ns),
            (GateKind::Measure, None) => step(&mut clock, q, d.measure_ns),
            (GateKind::Barrier, None) => step(&mut clock, q, 0.0),
            (_, None) => step(&mut clock, q, d.one_qubit_ns),
        }
    }
    clock.into_iter().fold(0.0, f64::max)
}

fn circuit_time_oracle() -> Outcome {
    const CASES: usize = 2000;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut mismatches = Vec::new();
    for case in 0..CASES {
        let n = rng.random_range(1..=10);
        let durations = GateDurations {
            one_qubit_ns: rng.random_range(0.0..100.0),
            two_qubit_ns: rng.random_range(50.0..600.0),
            measure_ns: rng.random_range(100.0..3000.0),
        };
        let mut gates = Vec::new();
        for _ in 0..rng.random_range(0..150) {
            let q: Vec<usize> = {
                let mut all: Vec<usize> = (0..n).collect();
                all.shuffle(&mut rng);
                all
            };
            let mut g = match rng.random_range(0..12) {
                0..=3 => GateOp::sx(q[0]),
                4 => GateOp::measure(q[0]),
                5 => GateOp::barrier(q[..rng.random_range(1..=n)].to_vec()),
                6 if n > 1 => GateOp::swap(q[0], q[1]),
                7 if n > 2 => GateOp::bridge(q[0], q[1], q[2]),
                _ if n > 1 => GateOp::cx(q[0], q[1]),
                _ => GateOp::rz(0.3, q[0]),
            };
            if rng.random_bool(0.1) {
                g.duration_ns = Some(rng.random_range(0.0..500.0));
            }
            gates.push(g);
        }
        let c = Circuit::new(n, gates).expect("valid gates");
        let got = circuit_time(&c, &durations).expect("finite durations");
        let want = linear_scan_time(&c, &durations);
        if got != want {
            mismatches.push(format!("case {case}: {got} vs {want}"));
        }
    }
    let detail = match mismatches.first() {
        None => format!("{CASES}/{CASES} circuits match the linear scan exactly"),
        Some(m) => format!("{} mismatches, first: {m}", mismatches.len()),
    };
    Outcome::new(mismatches.is_empty(), detail)
}

fn epst_spot_values() -> Outcome {
    let pair = CouplingGraph::new(2, [(0, 1)]).expect("edge");
    let single = CouplingGraph::new(1, []).expect("single qubit");
    let mut notes = Vec::new();
    let mut pass = true;
    let mut check = |label: &str, got: f64, want: f64| {
        let ok = rel_close(got, want, 1e-4);
        pass &= ok;
        notes.push(format!("{label} {got:.6} (want {want})"));
    };

    let ideal = HardwareModel::uniform("ideal", pair.clone(), 1.0, 1.0, 1.0, 1e15, 1e15).expect("valid");
    let empty = Circuit::empty(2);
    let m = Mapping::new(vec![0, 1]).expect("mapping");
    check("empty", epst_star_at(&empty, &m, &ideal, 0.0).expect("report").epst_star, 1.0);

    let lossy = HardwareModel::uniform("cx", pair, 1.0, 0.97, 0.94, 1e15, 1e15).expect("valid");
    let cx_meas = Circuit::new(2, vec![GateOp::cx(0, 1), GateOp::measure(1)]).expect("valid");
    let r = epst_star_at(&cx_meas, &m, &lossy, 0.0).expect("report");
    check("cx+measure", r.epst_star, 0.9118);

    let idle = HardwareModel::uniform("idle", single, 1.0, 1.0, 1.0, 27.35, 20.0).expect("valid");
    let one = Circuit::new(1, vec![GateOp::measure(0)]).expect("valid");
    let r = epst_star_at(&one, &Mapping::new(vec![0]).expect("mapping"), &idle, 20_000.0).expect("report");
    check("T_phi", dephasing_time(0, 27.35, 20.0).expect("valid"), 15.764);
    check("r_a", r.amplitude_damping, 0.4813);
    check("r_p", r.phase_damping, 0.2812);
    Outcome::new(pass, notes.join(", "))
}

fn liveness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let circuit = |n: usize| Circuit::new(n, (0..n).map(GateOp::measure).collect()).expect("valid");
    let mut unit_failures = 0;
    for _ in 0..100 {
        let cfg = SchedulerConfig {
            alpha: rng.random_range(0.0..10.0),
            beta: rng.random_range(0.0..10.0),
            gamma: rng.random_range(0.0..10.0),
            delta_t: rng.random_range(1.0..1000.0),
            ..SchedulerConfig::default()
        };
        let t_i = rng.random_range(0.0..1000.0);
        let now = t_i + cfg.liveness_bound() + rng.random_range(0.0..2.0) * cfg.delta_t * rng.random_range(0..2) as f64;
        // The aged job is as unattractive as possible; fresh jobs are small.
        let mut jobs = vec![Job::new(JobId(0), circuit(16), 20_000, t_i).expect("job")];
        for k in 1..20u64 {
            let t = now - rng.random_range(0.0..cfg.delta_t * 0.999);
            jobs.push(Job::new(JobId(k), circuit(rng.random_range(1..4)), rng.random_range(1000..3000), t).expect("job"));
        }
        let stats = QueueStats::of(&jobs).expect("non-empty");
        let aged = priority_score(&jobs[0], &stats, &cfg, now);
        if jobs[1..].iter().any(|j| priority_score(j, &stats, &cfg, now) >= aged) {
            unit_failures += 1;
        }
    }

    let hw = builtin_topology(Topology::Ring16);
    let cfg = SchedulerConfig::default();
    let time = TimeModel::default();
    let bound = cfg.liveness_bound();
    let results: Vec<(bool, f64, f64)> = (0..20u64)
        .into_par_iter()
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(500 + seed);
            let t_i = rng.random_range(10.0..100.0);
            let mut jobs = vec![Job::new(JobId(0), synthetic_circuit(&mut rng, 13, 13), 20_000, t_i).expect("job")];
            let mut t = 0.0;
            let mut id = 1;
            while t < t_i + bound + 2000.0 {
                let w = rng.random_range(2..=3);
                let shots = rng.random_range(1000..=2000);
                jobs.push(Job::new(JobId(id), synthetic_circuit(&mut rng, w, w), shots, t).expect("job"));
                id += 1;
                t += rng.random_range(0.5..5.0);
            }
            let w = Workload::from_jobs(jobs, seed).expect("unique ids");
            let report = simulate(&w, &hw, Policy::Naqjs, &cfg, &time, seed).expect("schedulable");
            let big = report.jobs.iter().find(|j| j.id == JobId(0)).expect("big job ran");
            let instant = t_i + bound;
            let in_flight = report
                .round_log
                .iter()
                .find(|r| r.start < instant && r.end > instant)
                .map_or(0.0, |r| r.end - instant);
            let backlog: f64 = report
                .jobs
                .iter()
                .filter(|j| j.id != big.id && j.submit < instant && j.start >= instant)
                .map(|j| time.round_duration(j.shots))
                .sum();
            let deadline = instant + in_flight + backlog + time.round_duration(big.shots);
            (big.complete <= deadline, big.complete - t_i, deadline - t_i)
        })
        .collect();
    let e2e_failures = results.iter().filter(|r| !r.0).count();
    let worst_wait = results.iter().map(|r| r.1).fold(0.0, f64::max);
    Outcome::new(
        unit_failures == 0 && e2e_failures == 0,
        format!(
            "unit: {}/100 weight settings hold; end-to-end: {}/20 seeds within bound (bound {bound:.0} s, longest TAT {worst_wait:.0} s)",
            100 - unit_failures,
            20 - e2e_failures
        ),
    )
}

#[derive(Default, Clone, Copy)]
struct Avg {
    qpu: f64,
    tat: f64,
    std: f64,
    pst: f64,
}

fn averaged(reports: &[RunReport]) -> Avg {
    let n = reports.len() as f64;
    reports.iter().fold(Avg::default(), |a, r| Avg {
        qpu: a.qpu + r.metrics.qpu_time / n,
        tat: a.tat + r.metrics.tat_avg / n,
        std: a.std + r.metrics.tat_std / n,
        pst: a.pst + r.metrics.estimated_pst_avg / n,
    })
}

fn policy_direction() -> Outcome {
    const SEEDS: u64 = 5;
    let hw = builtin_topology(Topology::Ring16);
    let cfg = SchedulerConfig::default();
    let grid: Vec<(u64, Policy)> = (0..SEEDS).flat_map(|s| Policy::ALL.map(|p| (s, p))).collect();
    let reports: Vec<RunReport> = grid
        .par_iter()
        .map(|&(seed, policy)| run(&noise_workload(&hw, cfg.eta, seed), &hw, policy, &cfg, seed))
        .collect();
    let of = |p: Policy| averaged(&reports.iter().filter(|r| r.policy == p).cloned().collect::<Vec<_>>());
    let (fifo, fifop, naqjs) = (of(Policy::Fifo), of(Policy::FifoP), of(Policy::Naqjs));
    let reduction = 1.0 - naqjs.qpu / fifo.qpu;
    let pass = naqjs.tat < fifop.tat
        && fifop.tat < fifo.tat
        && naqjs.qpu <= fifop.qpu
        && fifop.qpu < fifo.qpu
        && reduction >= 0.30;
    let per_seed: Vec<String> = (0..SEEDS)
        .map(|s| {
            let q = |p| reports.iter().find(|r| r.seed == s && r.policy == p).expect("run").metrics.qpu_time;
            format!("s{s}:{:.0}/{:.0}/{:.0}", q(Policy::Fifo), q(Policy::FifoP), q(Policy::Naqjs))
        })
        .collect();
    Outcome::new(
        pass,
        format!(
            "mean over {SEEDS} seeds: TAT {:.0} < {:.0} < {:.0}; QPU {:.1} <= {:.1} < {:.1}; reduction {:.1}% (per-seed QPU fifo/fifo-p/naqjs {})",
            naqjs.tat,
            fifop.tat,
            fifo.tat,
            naqjs.qpu,
            fifop.qpu,
            fifo.qpu,
            100.0 * reduction,
            per_seed.join(" ")
        ),
    )
}

fn degeneration() -> Outcome {
    let hw = builtin_topology(Topology::Ring16);
    let cfg = SchedulerConfig {
        alpha: 0.0,
        beta: 0.0,
        aging: false,
        eta: 1.0,
        ..SchedulerConfig::default()
    };
    let seeds: Vec<u64> = (0..5).collect();
    let mismatched: Vec<u64> = seeds
        .par_iter()
        .filter(|&&seed| {
            let w = noise_workload(&hw, 1.0, seed);
            let a = run(&w, &hw, Policy::Naqjs, &cfg, seed);
            let b = run(&w, &hw, Policy::FifoP, &cfg, seed);
            a.round_log.iter().map(|r| &r.jobs).ne(b.round_log.iter().map(|r| &r.jobs))
        })
        .copied()
        .collect();
    Outcome::new(
        mismatched.is_empty(),
        format!("round-by-round selection identical on {}/{} seeds", seeds.len() - mismatched.len(), seeds.len()),
    )
}

fn trf_arithmetic() -> Outcome {
    let hw = builtin_topology(Topology::Ring16);
    let cfg = SchedulerConfig::default();
    let fifo_trf: Vec<f64> = (0..3)
        .map(|seed| run(&noise_workload(&hw, cfg.eta, seed), &hw, Policy::Fifo, &cfg, seed).metrics.trf)
        .collect();

    // Hand-built records: two rounds of two equal-shot jobs.
    let time = TimeModel::default();
    let record = |id, round| JobRecord {
        id: JobId(id),
        submit: 0.0,
        start: 0.0,
        complete: 1.0,
        tat: 1.0,
        width: 2,
        shots: 1000,
        epst_star: 1.0,
        round,
        partition: vec![],
    };
    let rounds: Vec<RoundRecord> = (0..2)
        .map(|i| RoundRecord {
            index: i,
            start: 0.0,
            end: 1.0,
            shots: 1000,
            t_c_ns: 0.0,
            jobs: vec![],
        })
        .collect();
    let synthetic = compute_metrics(&[record(1, 0), record(2, 0), record(3, 1), record(4, 1)], &rounds, &time).trf;

    // The same shape produced by the simulator: a second pair arrives while
    // the first round runs.
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let jobs = (0..4u64)
        .map(|k| Job::new(JobId(k), synthetic_circuit(&mut rng, 3, 3), 1000, if k < 2 { 0.0 } else { 1.0 }).expect("job"))
        .collect();
    let w = Workload::from_jobs(jobs, 0).expect("unique ids");
    let simulated = run(&w, &hw, Policy::Naqjs, &cfg, 0);

    let pass = fifo_trf.iter().all(|&t| t == 1.0) && synthetic == 2.0 && simulated.metrics.trf == 2.0 && simulated.metrics.rounds == 2;
    Outcome::new(
        pass,
        format!("FIFO TRF {fifo_trf:?}; two-round example {synthetic}; simulated two-round run {} over {} rounds", simulated.metrics.trf, simulated.metrics.rounds),
    )
}

fn eta_monotonicity() -> Outcome {
    let hw = builtin_topology(Topology::Grid66);
    let wide = SchedulerConfig::default();
    let narrow = SchedulerConfig { eta: 2.0 / 7.0, ..wide };
    let rows: Vec<(u64, RunReport, RunReport)> = (0..3u64)
        .into_par_iter()
        .map(|seed| {
            let w = noise_workload(&hw, narrow.eta, seed);
            (seed, run(&w, &hw, Policy::Naqjs, &wide, seed), run(&w, &hw, Policy::Naqjs, &narrow, seed))
        })
        .collect();
    let pass = rows.iter().all(|(_, a, b)| b.metrics.estimated_pst_avg > a.metrics.estimated_pst_avg && b.metrics.tat_avg > a.metrics.tat_avg);
    let detail: Vec<String> = rows
        .iter()
        .map(|(s, a, b)| {
            format!(
                "s{s}: PST {:.2e} -> {:.2e}, TAT {:.0} -> {:.0}",
                a.metrics.estimated_pst_avg, b.metrics.estimated_pst_avg, a.metrics.tat_avg, b.metrics.tat_avg
            )
        })
        .collect();
    Outcome::new(pass, format!("eta 5/6 -> 2/7 on grid66, {}", detail.join("; ")))
}

fn gamma_tradeoff() -> Outcome {
    let hw = builtin_topology(Topology::Ring16);
    let gammas = [0.0, 1.0, 4.0];
    let grid: Vec<(f64, u64)> = gammas.iter().flat_map(|&g| (0..5u64).map(move |s| (g, s))).collect();
    let reports: Vec<(f64, RunReport)> = grid
        .par_iter()
        .map(|&(gamma, seed)| {
            let cfg = SchedulerConfig { gamma, ..SchedulerConfig::default() };
            (gamma, run(&noise_workload(&hw, cfg.eta, seed), &hw, Policy::Naqjs, &cfg, seed))
        })
        .collect();
    let means: Vec<Avg> = gammas
        .iter()
        .map(|&g| averaged(&reports.iter().filter(|(x, _)| *x == g).map(|(_, r)| r.clone()).collect::<Vec<_>>()))
        .collect();
    let pass = means.windows(2).all(|w| w[1].std <= w[0].std && w[1].tat >= w[0].tat);
    let detail: Vec<String> = gammas
        .iter()
        .zip(&means)
        .map(|(g, m)| format!("gamma {g}: avg {:.1} std {:.1}", m.tat, m.std))
        .collect();
    Outcome::new(pass, format!("mean over 5 seeds, {}", detail.join("; ")))
}

fn scheduler_overhead() -> Outcome {
    let hw = builtin_topology(Topology::Ring16);
    let cfg = SchedulerConfig::default();
    let w = noise_workload(&hw, cfg.eta, 0);
    // Best of three runs each, measured without other work in flight.
    let best = |p: Policy| (0..3).map(|_| run(&w, &hw, p, &cfg, 0).scheduler_runtime).fold(f64::INFINITY, f64::min);
    let fifo = best(Policy::Fifo);
    let naqjs = best(Policy::Naqjs);
    let ratio = naqjs / fifo;
    Outcome::new(ratio <= 2.0, format!("RT naqjs {naqjs:.3} s, fifo {fifo:.3} s, ratio {ratio:.2}"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("routing legality", routing_legality),
        ("routing semantics", routing_semantics),
        ("circuit time vs linear scan", circuit_time_oracle),
        ("EPST* spot values", epst_spot_values),
        ("liveness", liveness),
        ("policy directionality", policy_direction),
        ("degeneration to FIFO-p", degeneration),
        ("TRF arithmetic", trf_arithmetic),
        ("eta monotonicity", eta_monotonicity),
        ("gamma trade-off", gamma_tradeoff),
        ("scheduler overhead", scheduler_overhead),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = check();
        let status = if out.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!out.pass);
        println!("[{status}] {:>2}. {name} ({:.1} s): {}", i + 1, start.elapsed().as_secs_f64(), out.detail);
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
