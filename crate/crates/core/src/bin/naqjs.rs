use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{info, warn};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use naqjs::circuit::{expand_composites, Circuit, GateKind, GateOp};
use naqjs::formats::{parse_circuit, CircuitFormat};
use naqjs::hardware::{builtin_topology_seeded, scale_noise, HardwareModel, Topology, DEFAULT_CALIBRATION_SEED};
use naqjs::mapper::{initial_mapping, RoutedCircuit};
use naqjs::oracle::{equivalent_under_permutation, MAX_STATE_QUBITS};
use naqjs::partition::{best_partition, RemainingGraph};
use naqjs::sim::{generate_workload, simulate, Policy, RunReport, ShotProfile, TimeModel, Workload, WorkloadParams};
use naqjs::{ConfigError, SchedulerConfig};

const EXIT_CONFIG: u8 = 2;
const EXIT_SIMULATION: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(name = "naqjs", version, about = "Noise-aware quantum job scheduler and QPU simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic workload as JSON lines.
    Generate(GenerateArgs),
    /// Simulate workloads under one or more policies.
    Run(RunArgs),
    /// Route circuits and check legality and equivalence.
    Verify(VerifyArgs),
    /// Vary one scheduler parameter and record the resulting metrics.
    Sweep(SweepArgs),
}

#[derive(Args, Clone)]
struct HardwareArgs {
    /// Built-in topology (ring16, chain16, grid66) or a calibration JSON file.
    #[arg(long, default_value = "ring16")]
    hardware: String,
    /// Seed for built-in calibration jitter.
    #[arg(long, default_value_t = DEFAULT_CALIBRATION_SEED)]
    calibration_seed: u64,
    /// Multiply every error rate by this factor.
    #[arg(long, default_value_t = 1.0)]
    noise_level: f64,
}

#[derive(Args, Clone)]
struct WorkloadArgs {
    /// Shot range: noise-model (1k-20k) or device (500-10k).
    #[arg(long, default_value = "noise-model")]
    profile: String,
    /// Jobs queued at t = 0.
    #[arg(long, default_value_t = 44)]
    initial: usize,
    /// Jobs arriving afterwards.
    #[arg(long, default_value_t = 400)]
    arrivals: usize,
    /// Widest generated circuit.
    #[arg(long, default_value_t = 16)]
    max_width: usize,
}

#[derive(Args, Clone, Default)]
struct SchedulerArgs {
    /// JSON or TOML file with alpha, beta, gamma, eta, delta_t, repeats,
    /// seed, shot_time_us and overhead_s.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Weight of job width in the priority score [default: 6]
    #[arg(long)]
    alpha: Option<f64>,
    /// Weight of shot count [default: 4.5]
    #[arg(long)]
    beta: Option<f64>,
    /// Weight of submission time [default: 1]
    #[arg(long)]
    gamma: Option<f64>,
    /// Largest fraction of qubits one round may use [default: 5/6]
    #[arg(long)]
    eta: Option<f64>,
    /// Aging period in seconds [default: 360]
    #[arg(long)]
    delta_t: Option<f64>,
    /// Initial-mapping refinement iterations [default: 3]
    #[arg(long)]
    repeats: Option<usize>,
    #[arg(long)]
    no_aging: bool,
    /// [default: 200]
    #[arg(long)]
    shot_time_us: Option<f64>,
    /// Per-round setup time [default: 10]
    #[arg(long)]
    overhead_s: Option<f64>,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    workload: WorkloadArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; defaults to workload.jsonl in the output directory.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, env = "NAQJS_OUT_DIR", default_value = "naqjs-out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    hardware: HardwareArgs,
    #[command(flatten)]
    scheduler: SchedulerArgs,
    #[command(flatten)]
    workload_gen: WorkloadArgs,
    /// Comma-separated policies.
    #[arg(long, value_delimiter = ',', default_value = "fifo,fifo-p,naqjs")]
    policies: Vec<String>,
    /// Comma-separated seeds; each seed generates its own workload unless
    /// --workload is given.
    #[arg(long = "seeds", alias = "seed", value_delimiter = ',')]
    seeds: Vec<u64>,
    #[arg(long)]
    workload: Option<PathBuf>,
    #[arg(long, env = "NAQJS_OUT_DIR", default_value = "naqjs-out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    hardware: HardwareArgs,
    #[arg(long, conflicts_with = "circuit")]
    workload: Option<PathBuf>,
    /// A single QASM or JSON circuit.
    #[arg(long)]
    circuit: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Overlap tolerance of the equivalence check.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Corrupt one gate of every routed circuit before checking it.
    #[arg(long, hide = true)]
    inject_fault: bool,
}

/// One parameter takes a comma-separated list of values and is swept; the
/// others, if given once, override the base configuration.
#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    hardware: HardwareArgs,
    #[command(flatten)]
    workload_gen: WorkloadArgs,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    beta: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    gamma: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    eta: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    delta_t: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    repeats: Vec<f64>,
    #[arg(long, default_value = "naqjs")]
    policy: String,
    #[arg(long = "seeds", alias = "seed", value_delimiter = ',')]
    seeds: Vec<u64>,
    #[arg(long)]
    workload: Option<PathBuf>,
    #[arg(long, env = "NAQJS_OUT_DIR", default_value = "naqjs-out")]
    out_dir: PathBuf,
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Simulation(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => EXIT_CONFIG,
            Failure::Simulation(_) => EXIT_SIMULATION,
            Failure::Verification(_) => EXIT_VERIFY,
        }
    }
}

fn config_err(e: impl std::fmt::Display) -> Failure {
    Failure::Config(e.to_string())
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Config(format!("{}: {e}", path.display()))
}

/// Keys accepted in a config file.
#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    alpha: Option<f64>,
    beta: Option<f64>,
    gamma: Option<f64>,
    eta: Option<f64>,
    delta_t: Option<f64>,
    repeats: Option<usize>,
    seed: Option<u64>,
    shot_time_us: Option<f64>,
    overhead_s: Option<f64>,
}

fn read_file_config(path: &Path) -> Result<FileConfig, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let parsed = if path.extension().is_some_and(|e| e == "toml") {
        toml::from_str(&text).map_err(|e| e.to_string())
    } else {
        serde_json::from_str(&text).map_err(|e| e.to_string())
    };
    parsed.map_err(|e| config_err(ConfigError::Parse(format!("{}: {e}", path.display()))))
}

/// Defaults, then the config file, then explicit flags.
fn resolve_config(args: &SchedulerArgs) -> Result<(SchedulerConfig, TimeModel, Option<u64>), Failure> {
    let file = match &args.config {
        Some(p) => read_file_config(p)?,
        None => FileConfig::default(),
    };
    let mut cfg = SchedulerConfig::default();
    let mut time = TimeModel::default();
    let pick = |flag: Option<f64>, file: Option<f64>, default: f64| flag.or(file).unwrap_or(default);
    cfg.alpha = pick(args.alpha, file.alpha, cfg.alpha);
    cfg.beta = pick(args.beta, file.beta, cfg.beta);
    cfg.gamma = pick(args.gamma, file.gamma, cfg.gamma);
    cfg.eta = pick(args.eta, file.eta, cfg.eta);
    cfg.delta_t = pick(args.delta_t, file.delta_t, cfg.delta_t);
    cfg.repeats = args.repeats.or(file.repeats).unwrap_or(cfg.repeats);
    cfg.aging = !args.no_aging;
    if let Some(us) = args.shot_time_us.or(file.shot_time_us) {
        time.shot_time_s = us / 1e6;
    }
    time.overhead_s = pick(args.overhead_s, file.overhead_s, time.overhead_s);
    cfg.validate().map_err(config_err)?;
    time.validate().map_err(config_err)?;
    Ok((cfg, time, file.seed))
}

fn load_hardware(args: &HardwareArgs) -> Result<HardwareModel, Failure> {
    let hw = match args.hardware.parse::<Topology>() {
        Ok(t) => builtin_topology_seeded(t, args.calibration_seed),
        Err(unknown) => {
            let path = Path::new(&args.hardware);
            if !path.exists() {
                return Err(config_err(unknown));
            }
            let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            let name = path.file_stem().map_or("device".into(), |s| s.to_string_lossy().into_owned());
            HardwareModel::from_json(name, &text).map_err(config_err)?
        }
    };
    scale_noise(&hw, args.noise_level).map_err(config_err)
}

fn workload_params(args: &WorkloadArgs) -> Result<WorkloadParams, Failure> {
    let profile: ShotProfile = args.profile.parse().map_err(config_err)?;
    let params = WorkloadParams {
        initial_jobs: args.initial,
        arrivals: args.arrivals,
        max_width: args.max_width,
        ..WorkloadParams::with_profile(profile)
    };
    params.validate().map_err(config_err)?;
    Ok(params)
}

fn read_workload(path: &Path, seed: u64) -> Result<Workload, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let base = path.parent().unwrap_or(Path::new("."));
    Workload::from_jsonl(&text, base, seed).map_err(config_err)
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| io_err(path, e))
}

fn parse_policies(names: &[String]) -> Result<Vec<Policy>, Failure> {
    if names.is_empty() {
        return Err(config_err("at least one policy is required"));
    }
    names.iter().map(|n| n.trim().parse().map_err(config_err)).collect()
}

fn cmd_generate(args: GenerateArgs) -> Result<(), Failure> {
    let params = workload_params(&args.workload)?;
    let workload = generate_workload(&params, args.seed).map_err(config_err)?;
    let path = args.output.unwrap_or_else(|| args.out_dir.join("workload.jsonl"));
    write(&path, &workload.to_jsonl())?;
    println!("{} jobs written to {}", workload.len(), path.display());
    Ok(())
}

/// Workload for one seed: the given file, or a generated stream whose widths
/// fit the tightest per-round budget among `policies`.
fn workload_for(
    file: Option<&Workload>,
    params: &WorkloadParams,
    hw: &HardwareModel,
    cfg: &SchedulerConfig,
    policies: &[Policy],
    seed: u64,
) -> Result<Workload, Failure> {
    if let Some(w) = file {
        return Ok(w.clone());
    }
    let eta = if policies.contains(&Policy::Naqjs) { cfg.eta } else { 1.0 };
    let fitted = params.fitted_to(hw, eta);
    if fitted.max_width < params.max_width {
        info!("capping generated widths at {} to fit eta = {eta:.3}", fitted.max_width);
    }
    generate_workload(&fitted, seed).map_err(config_err)
}

fn percent(value: f64, base: Option<f64>) -> String {
    match base {
        Some(b) if b != 0.0 => format!("{:.2}", 100.0 * (value - b) / b),
        _ => String::new(),
    }
}

fn comparison_csv(reports: &[RunReport]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = [
        "seed", "policy", "qpu_time_s", "delta_qpu_pct", "tat_max_s", "tat_avg_s", "delta_tat_avg_pct", "tat_std_s",
        "delta_tat_std_pct", "rt_s", "trf", "est_pst",
    ];
    w.write_record(header).map_err(config_err)?;
    for r in reports {
        let fifo = reports.iter().find(|b| b.seed == r.seed && b.policy == Policy::Fifo).map(|b| &b.metrics);
        let m = &r.metrics;
        w.write_record([
            r.seed.to_string(),
            r.policy.to_string(),
            format!("{:.3}", m.qpu_time),
            percent(m.qpu_time, fifo.map(|f| f.qpu_time)),
            format!("{:.3}", m.tat_max),
            format!("{:.3}", m.tat_avg),
            percent(m.tat_avg, fifo.map(|f| f.tat_avg)),
            format!("{:.3}", m.tat_std),
            percent(m.tat_std, fifo.map(|f| f.tat_std)),
            format!("{:.4}", r.scheduler_runtime),
            format!("{:.4}", m.trf),
            format!("{:.6}", m.estimated_pst_avg),
        ])
        .map_err(config_err)?;
    }
    let bytes = w.into_inner().map_err(|e| config_err(e.error()))?;
    Ok(String::from_utf8(bytes).expect("utf-8 csv"))
}

fn cmd_run(args: RunArgs) -> Result<(), Failure> {
    let (cfg, time, file_seed) = resolve_config(&args.scheduler)?;
    let hw = load_hardware(&args.hardware)?;
    let policies = parse_policies(&args.policies)?;
    let seeds = if args.seeds.is_empty() { vec![file_seed.unwrap_or(0)] } else { args.seeds.clone() };
    let params = workload_params(&args.workload_gen)?;
    let file = args.workload.as_deref().map(|p| read_workload(p, seeds[0])).transpose()?;

    let workloads = seeds
        .iter()
        .map(|&s| workload_for(file.as_ref(), &params, &hw, &cfg, &policies, s).map(|w| (s, w)))
        .collect::<Result<Vec<_>, _>>()?;
    let grid: Vec<(u64, &Workload, Policy)> = workloads
        .iter()
        .flat_map(|(s, w)| policies.iter().map(move |&p| (*s, w, p)))
        .collect();
    let reports = grid
        .par_iter()
        .map(|&(seed, w, policy)| {
            simulate(w, &hw, policy, &cfg, &time, seed)
                .map_err(|e| Failure::Simulation(format!("{policy}, seed {seed}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;

    for r in &reports {
        let stem = format!("{}_seed{}", r.policy, r.seed);
        let json = serde_json::to_string_pretty(r).expect("report json");
        write(&args.out_dir.join(format!("report_{stem}.json")), &json)?;
        write(&args.out_dir.join(format!("jobs_{stem}.csv")), &r.jobs_csv().map_err(config_err)?)?;
    }
    let table = comparison_csv(&reports)?;
    write(&args.out_dir.join("comparison.csv"), &table)?;
    print!("{table}");
    Ok(())
}

#[derive(Serialize)]
struct SweepRow {
    param: String,
    value: f64,
    seed: u64,
    policy: String,
    qpu_time_s: f64,
    tat_max_s: f64,
    tat_avg_s: f64,
    tat_std_s: f64,
    trf: f64,
    est_pst: f64,
    rt_s: f64,
}

fn with_param(mut cfg: SchedulerConfig, param: &str, value: f64) -> Result<SchedulerConfig, Failure> {
    match param {
        "alpha" => cfg.alpha = value,
        "beta" => cfg.beta = value,
        "gamma" => cfg.gamma = value,
        "eta" => cfg.eta = value,
        "delta_t" => cfg.delta_t = value,
        "repeats" if value >= 1.0 && value.fract() == 0.0 => cfg.repeats = value as usize,
        other => return Err(config_err(format!("cannot sweep `{other}` over value {value}"))),
    }
    cfg.validate().map_err(config_err)?;
    Ok(cfg)
}

fn cmd_sweep(args: SweepArgs) -> Result<(), Failure> {
    let lists = [
        ("alpha", &args.alpha),
        ("beta", &args.beta),
        ("gamma", &args.gamma),
        ("eta", &args.eta),
        ("delta_t", &args.delta_t),
        ("repeats", &args.repeats),
    ];
    let swept: Vec<_> = lists.iter().filter(|(_, v)| v.len() > 1).collect();
    let (param, values) = match swept.as_slice() {
        [one] => (one.0, one.1.clone()),
        [] => return Err(config_err("give one parameter a comma-separated list of values to sweep")),
        _ => return Err(config_err("only one parameter can be swept at a time")),
    };
    let sched = SchedulerArgs {
        config: args.config.clone(),
        ..Default::default()
    };
    let (mut base, time, file_seed) = resolve_config(&sched)?;
    for (name, v) in lists.iter().filter(|(_, v)| v.len() == 1) {
        base = with_param(base, name, v[0])?;
    }
    let hw = load_hardware(&args.hardware)?;
    let policy: Policy = args.policy.parse().map_err(config_err)?;
    let seeds = if args.seeds.is_empty() { vec![file_seed.unwrap_or(0)] } else { args.seeds.clone() };
    let params = workload_params(&args.workload_gen)?;
    let file = args.workload.as_deref().map(|p| read_workload(p, seeds[0])).transpose()?;
    let configs = values
        .iter()
        .map(|&v| with_param(base, param, v).map(|c| (v, c)))
        .collect::<Result<Vec<_>, _>>()?;
    // One workload per seed, fitted to the tightest eta in the sweep.
    let tightest = configs.iter().map(|(_, c)| *c).fold(base, |a, c| if c.eta < a.eta { c } else { a });
    let workloads = seeds
        .iter()
        .map(|&s| workload_for(file.as_ref(), &params, &hw, &tightest, &[policy], s).map(|w| (s, w)))
        .collect::<Result<Vec<_>, _>>()?;
    let grid: Vec<(f64, SchedulerConfig, u64, &Workload)> = configs
        .iter()
        .flat_map(|&(v, c)| workloads.iter().map(move |(s, w)| (v, c, *s, w)))
        .collect();
    let rows = grid
        .par_iter()
        .map(|&(value, cfg, seed, w)| {
            let r = simulate(w, &hw, policy, &cfg, &time, seed)
                .map_err(|e| Failure::Simulation(format!("{param}={value}, seed {seed}: {e}")))?;
            Ok(SweepRow {
                param: param.to_string(),
                value,
                seed,
                policy: policy.to_string(),
                qpu_time_s: r.metrics.qpu_time,
                tat_max_s: r.metrics.tat_max,
                tat_avg_s: r.metrics.tat_avg,
                tat_std_s: r.metrics.tat_std,
                trf: r.metrics.trf,
                est_pst: r.metrics.estimated_pst_avg,
                rt_s: r.scheduler_runtime,
            })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        w.serialize(row).map_err(config_err)?;
    }
    let text = String::from_utf8(w.into_inner().map_err(|e| config_err(e.error()))?).expect("utf-8 csv");
    write(&args.out_dir.join(format!("sweep_{param}.csv")), &text)?;
    print!("{text}");
    Ok(())
}

/// Swaps control and target of the first CX, or appends an X if there is none.
fn corrupt(routed: &RoutedCircuit) -> RoutedCircuit {
    let mut gates: Vec<GateOp> = expand_composites(&routed.circuit).gates().to_vec();
    match gates.iter().position(|g| g.kind == GateKind::Cx) {
        Some(i) => gates[i] = GateOp::cx(gates[i].qubits[1], gates[i].qubits[0]),
        None => gates.push(GateOp::x(routed.initial_mapping.physical(0))),
    }
    RoutedCircuit {
        circuit: Circuit::new(routed.circuit.num_qubits(), gates).expect("corrupted circuit stays valid"),
        ..routed.clone()
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let hw = load_hardware(&args.hardware)?;
    let circuits: Vec<(String, Circuit)> = match (&args.workload, &args.circuit) {
        (Some(p), None) => read_workload(p, args.seed)?
            .jobs()
            .map(|j| (format!("job {}", j.id), j.circuit.clone()))
            .collect(),
        (None, Some(p)) => {
            let text = fs::read_to_string(p).map_err(|e| io_err(p, e))?;
            let format = if p.extension().is_some_and(|e| e == "json") { CircuitFormat::Json } else { CircuitFormat::Qasm };
            vec![(p.display().to_string(), parse_circuit(&text, format).map_err(config_err)?)]
        }
        _ => return Err(config_err("one of --workload or --circuit is required")),
    };
    let cfg = SchedulerConfig {
        repeats: args.repeats,
        ..Default::default()
    };
    cfg.validate().map_err(config_err)?;
    let idle = RemainingGraph::full(&hw);
    let mut failures = 0usize;
    for (label, circuit) in &circuits {
        let Some(partition) = best_partition(circuit, &idle, &hw) else {
            println!("{label}: FAIL (no {}-qubit partition on {})", circuit.num_qubits(), hw.name);
            failures += 1;
            continue;
        };
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let outcome = initial_mapping(circuit, &partition.qubits, &hw, &cfg.mapper(), &mut rng)
            .map_err(|e| Failure::Simulation(format!("{label}: {e}")))?;
        let routed = if args.inject_fault { corrupt(&outcome.routed) } else { outcome.routed };
        let legal = expand_composites(&routed.circuit)
            .gates()
            .iter()
            .filter(|g| g.kind.is_two_qubit_gate())
            .all(|g| hw.graph.has_edge(g.qubits[0], g.qubits[1]));
        let verdict = if !legal {
            Some(false)
        } else if circuit.num_qubits() > MAX_STATE_QUBITS {
            warn!("{label}: width {} exceeds the oracle limit, checking legality only", circuit.num_qubits());
            None
        } else {
            Some(equivalent_under_permutation(circuit, &routed, args.tol).map_err(|e| Failure::Simulation(e.to_string()))?)
        };
        let status = match (legal, verdict) {
            (true, Some(true)) => "ok",
            (true, None) => "ok (legality only)",
            (false, _) => "FAIL (illegal two-qubit gate)",
            (true, Some(false)) => "FAIL (not equivalent)",
        };
        if status.starts_with("FAIL") {
            failures += 1;
        }
        println!(
            "{label}: {status} [{} swaps, {} bridges, EPST* {:.4}]",
            routed.swaps, routed.bridges, outcome.epst_star
        );
    }
    if failures > 0 {
        return Err(Failure::Verification(format!("{failures} of {} circuits failed", circuits.len())));
    }
    println!("all {} circuits verified", circuits.len());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Run(a) => cmd_run(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => cmd_sweep(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let msg = match &f {
                Failure::Config(m) => format!("configuration error: {m}"),
                Failure::Simulation(m) => format!("simulation error: {m}"),
                Failure::Verification(m) => format!("verification failed: {m}"),
            };
            eprintln!("naqjs: {msg}");
            ExitCode::from(f.code())
        }
    }
}
