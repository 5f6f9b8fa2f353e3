//! Device model: coupling graph plus per-qubit / per-edge calibration.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::str::FromStr;

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::GateDurations;
use crate::error::HardwareError;

/// Undirected simple coupling graph.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingGraph {
    num_qubits: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

fn norm(a: usize, b: usize) -> (usize, usize) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl CouplingGraph {
    pub fn new(num_qubits: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, HardwareError> {
        let mut adjacency = vec![Vec::new(); num_qubits];
        let mut out = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(HardwareError::InvalidGraph(format!("self-loop on qubit {a}")));
            }
            if a >= num_qubits || b >= num_qubits {
                return Err(HardwareError::InvalidGraph(format!(
                    "edge ({a}, {b}) out of range for {num_qubits} qubits"
                )));
            }
            let e = norm(a, b);
            if out.contains(&e) {
                return Err(HardwareError::InvalidGraph(format!("duplicate edge {e:?}")));
            }
            out.push(e);
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for row in &mut adjacency {
            row.sort_unstable();
        }
        let g = CouplingGraph {
            num_qubits,
            edges: out,
            adjacency,
        };
        if num_qubits > 0 && !g.is_connected() {
            warn!("coupling graph with {num_qubits} qubits is not connected");
        }
        Ok(g)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Sorted neighbours.
    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    pub fn degree(&self, q: usize) -> usize {
        self.adjacency[q].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.num_qubits && self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        if self.num_qubits == 0 {
            return true;
        }
        self.bfs_hops(0).iter().all(|d| d.is_some())
    }

    fn bfs_hops(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.num_qubits];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &v in &self.adjacency[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn without_edge(&self, a: usize, b: usize) -> Result<CouplingGraph, HardwareError> {
        let e = norm(a, b);
        if !self.edges.contains(&e) {
            return Err(HardwareError::InvalidGraph(format!("no edge {e:?} to remove")));
        }
        CouplingGraph::new(self.num_qubits, self.edges.iter().copied().filter(|&x| x != e))
    }
}

/// Calibration data. Reliabilities are success probabilities in (0, 1];
/// coherence times are in microseconds.
#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    pub r_1q: Vec<f64>,
    pub r_2q: HashMap<(usize, usize), f64>,
    pub r_ro: Vec<f64>,
    pub t1_us: Vec<f64>,
    pub t2_us: Vec<f64>,
    pub durations: GateDurations,
}

impl Calibration {
    pub fn two_qubit(&self, a: usize, b: usize) -> Option<f64> {
        self.r_2q.get(&norm(a, b)).copied()
    }
}

/// Device-average reliabilities used as the default calibration means.
pub const MEAN_R_1Q: f64 = 0.9985;
pub const MEAN_R_2Q: f64 = 0.9707;
pub const MEAN_R_RO: f64 = 0.9397;
pub const MEAN_T1_US: f64 = 27.35;
pub const MEAN_T2_US: f64 = 20.0;
/// Relative spread of the per-element jitter in default calibrations.
pub const CALIBRATION_JITTER: f64 = 0.2;
/// Largest error rate `scale_noise` will produce.
pub const NOISE_ERROR_CAP: f64 = 0.75;
/// Extra distance per unit of two-qubit error in the noise-aware metric.
pub const NOISE_DISTANCE_WEIGHT: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct HardwareModel {
    pub name: String,
    pub graph: CouplingGraph,
    pub cal: Calibration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Ring16,
    Chain16,
    Grid66,
}

impl FromStr for Topology {
    type Err = HardwareError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ring16" | "guadalupe" => Ok(Topology::Ring16),
            "chain16" | "chain" => Ok(Topology::Chain16),
            "grid66" | "xiaohong" => Ok(Topology::Grid66),
            _ => Err(HardwareError::UnknownTopology(s.to_string())),
        }
    }
}

/// The 16-qubit heavy-hex layout: a 12-qubit ring with four pendant qubits.
const RING16_EDGES: [(usize, usize); 16] = [
    (0, 1),
    (1, 2),
    (1, 4),
    (2, 3),
    (3, 5),
    (4, 7),
    (5, 8),
    (6, 7),
    (7, 10),
    (8, 9),
    (8, 11),
    (10, 12),
    (11, 14),
    (12, 13),
    (12, 15),
    (13, 14),
];

/// Default seed for built-in calibrations.
pub const DEFAULT_CALIBRATION_SEED: u64 = 2024;

pub fn builtin_topology(topology: Topology) -> HardwareModel {
    builtin_topology_seeded(topology, DEFAULT_CALIBRATION_SEED)
}

/// Built-in device with calibration drawn around the default means.
///
/// `chain16` reuses `ring16`'s calibration with the (1, 4) edge removed, so
/// both devices share every remaining per-qubit and per-edge value.
pub fn builtin_topology_seeded(topology: Topology, seed: u64) -> HardwareModel {
    match topology {
        Topology::Ring16 => {
            let graph = CouplingGraph::new(16, RING16_EDGES).expect("ring16 edges");
            let cal = jittered_calibration(&graph, seed);
            HardwareModel {
                name: "ring16".into(),
                graph,
                cal,
            }
        }
        Topology::Chain16 => {
            let ring = builtin_topology_seeded(Topology::Ring16, seed);
            let graph = ring.graph.without_edge(1, 4).expect("ring16 has (1,4)");
            let mut cal = ring.cal;
            cal.r_2q.remove(&(1, 4));
            HardwareModel {
                name: "chain16".into(),
                graph,
                cal,
            }
        }
        Topology::Grid66 => {
            let (rows, cols) = (6, 11);
            let mut edges = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    let q = r * cols + c;
                    if c + 1 < cols {
                        edges.push((q, q + 1));
                    }
                    if r + 1 < rows {
                        edges.push((q, q + cols));
                    }
                }
            }
            let graph = CouplingGraph::new(rows * cols, edges).expect("grid edges");
            let cal = jittered_calibration(&graph, seed);
            HardwareModel {
                name: "grid66".into(),
                graph,
                cal,
            }
        }
    }
}

fn jittered_calibration(graph: &CouplingGraph, seed: u64) -> Calibration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jitter = |mean: f64| mean * (1.0 + rng.random_range(-CALIBRATION_JITTER..=CALIBRATION_JITTER));
    let n = graph.num_qubits();
    // Jitter is applied to error rates so reliabilities stay below one.
    let r_1q: Vec<f64> = (0..n).map(|_| 1.0 - jitter(1.0 - MEAN_R_1Q)).collect();
    let r_ro: Vec<f64> = (0..n).map(|_| 1.0 - jitter(1.0 - MEAN_R_RO)).collect();
    let t1_us: Vec<f64> = (0..n).map(|_| jitter(MEAN_T1_US)).collect();
    let t2_us: Vec<f64> = t1_us
        .iter()
        .map(|&t1| jitter(MEAN_T2_US).min(1.9 * t1))
        .collect();
    let r_2q = graph
        .edges()
        .iter()
        .map(|&e| (e, 1.0 - jitter(1.0 - MEAN_R_2Q)))
        .collect();
    Calibration {
        r_1q,
        r_2q,
        r_ro,
        t1_us,
        t2_us,
        durations: GateDurations::default(),
    }
}

impl HardwareModel {
    pub fn new(name: impl Into<String>, graph: CouplingGraph, cal: Calibration) -> Result<Self, HardwareError> {
        let hw = HardwareModel {
            name: name.into(),
            graph,
            cal,
        };
        hw.validate()?;
        Ok(hw)
    }

    /// Every calibration value of the device equal to the given means.
    pub fn uniform(name: impl Into<String>, graph: CouplingGraph, r_1q: f64, r_2q: f64, r_ro: f64, t1_us: f64, t2_us: f64) -> Result<Self, HardwareError> {
        let n = graph.num_qubits();
        let cal = Calibration {
            r_1q: vec![r_1q; n],
            r_2q: graph.edges().iter().map(|&e| (e, r_2q)).collect(),
            r_ro: vec![r_ro; n],
            t1_us: vec![t1_us; n],
            t2_us: vec![t2_us; n],
            durations: GateDurations::default(),
        };
        Self::new(name, graph, cal)
    }

    pub fn num_qubits(&self) -> usize {
        self.graph.num_qubits()
    }

    pub fn validate(&self) -> Result<(), HardwareError> {
        let n = self.num_qubits();
        let bad = |m: String| Err(HardwareError::InvalidCalibration(m));
        for (label, v) in [("r_1q", &self.cal.r_1q), ("r_ro", &self.cal.r_ro), ("t1_us", &self.cal.t1_us), ("t2_us", &self.cal.t2_us)] {
            if v.len() != n {
                return bad(format!("{label} has {} entries, device has {n} qubits", v.len()));
            }
        }
        let in_unit = |r: f64| r > 0.0 && r <= 1.0;
        for q in 0..n {
            if !in_unit(self.cal.r_1q[q]) || !in_unit(self.cal.r_ro[q]) {
                return bad(format!("qubit {q}: reliabilities must lie in (0, 1]"));
            }
            let (t1, t2) = (self.cal.t1_us[q], self.cal.t2_us[q]);
            if !(t1 > 0.0 && t2 > 0.0) {
                return bad(format!("qubit {q}: T1 and T2 must be positive"));
            }
            if t2 > 2.0 * t1 {
                return bad(format!("qubit {q}: T2 = {t2} exceeds 2*T1 = {}", 2.0 * t1));
            }
        }
        for &(a, b) in self.graph.edges() {
            match self.cal.two_qubit(a, b) {
                Some(r) if in_unit(r) => {}
                Some(_) => return bad(format!("edge ({a}, {b}): reliability must lie in (0, 1]")),
                None => return bad(format!("edge ({a}, {b}) has no r_2q entry")),
            }
        }
        let d = self.cal.durations;
        if [d.one_qubit_ns, d.two_qubit_ns, d.measure_ns]
            .iter()
            .any(|x| !(x.is_finite() && *x >= 0.0))
        {
            return bad("durations must be finite and non-negative".into());
        }
        Ok(())
    }

    /// Mean reliabilities over the whole device: (1q, 2q, readout).
    pub fn mean_reliabilities(&self) -> (f64, f64, f64) {
        let mean = |v: &[f64]| if v.is_empty() { 1.0 } else { v.iter().sum::<f64>() / v.len() as f64 };
        let r2: Vec<f64> = self
            .graph
            .edges()
            .iter()
            .filter_map(|&(a, b)| self.cal.two_qubit(a, b))
            .collect();
        (mean(&self.cal.r_1q), mean(&r2), mean(&self.cal.r_ro))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CalibrationFile::from(self)).expect("calibration json")
    }

    pub fn from_json(name: impl Into<String>, text: &str) -> Result<Self, HardwareError> {
        let file: CalibrationFile = serde_json::from_str(text).map_err(|e| HardwareError::Json(e.to_string()))?;
        file.into_model(name)
    }
}

/// On-disk calibration schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationFile {
    pub num_qubits: usize,
    pub edges: Vec<[usize; 2]>,
    pub r_1q: Vec<f64>,
    pub r_2q: BTreeMap<String, f64>,
    pub r_ro: Vec<f64>,
    pub t1_us: Vec<f64>,
    pub t2_us: Vec<f64>,
    pub durations_ns: GateDurations,
}

impl From<&HardwareModel> for CalibrationFile {
    fn from(hw: &HardwareModel) -> Self {
        CalibrationFile {
            num_qubits: hw.num_qubits(),
            edges: hw.graph.edges().iter().map(|&(a, b)| [a, b]).collect(),
            r_1q: hw.cal.r_1q.clone(),
            r_2q: hw
                .cal
                .r_2q
                .iter()
                .map(|(&(a, b), &r)| (format!("{a}-{b}"), r))
                .collect(),
            r_ro: hw.cal.r_ro.clone(),
            t1_us: hw.cal.t1_us.clone(),
            t2_us: hw.cal.t2_us.clone(),
            durations_ns: hw.cal.durations,
        }
    }
}

impl CalibrationFile {
    pub fn into_model(self, name: impl Into<String>) -> Result<HardwareModel, HardwareError> {
        let graph = CouplingGraph::new(self.num_qubits, self.edges.iter().map(|e| (e[0], e[1])))?;
        let mut r_2q = HashMap::new();
        for (key, r) in self.r_2q {
            let parsed = key
                .split_once('-')
                .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)));
            let (a, b) = parsed.ok_or_else(|| HardwareError::Json(format!("bad r_2q key `{key}`, expected \"i-j\"")))?;
            r_2q.insert(norm(a, b), r);
        }
        HardwareModel::new(
            name,
            graph,
            Calibration {
                r_1q: self.r_1q,
                r_2q,
                r_ro: self.r_ro,
                t1_us: self.t1_us,
                t2_us: self.t2_us,
                durations: self.durations_ns,
            },
        )
    }
}

/// Multiplies every gate and readout error rate by `level`, capping at
/// [`NOISE_ERROR_CAP`]. Coherence times are left unchanged.
pub fn scale_noise(hw: &HardwareModel, level: f64) -> Result<HardwareModel, HardwareError> {
    if !(level.is_finite() && level > 0.0) {
        return Err(HardwareError::InvalidNoiseLevel(level));
    }
    let mut clamped = 0usize;
    let mut scale = |r: f64| {
        let e = (1.0 - r) * level;
        if e > NOISE_ERROR_CAP {
            clamped += 1;
            1.0 - NOISE_ERROR_CAP
        } else {
            1.0 - e
        }
    };
    let mut out = hw.clone();
    if level != 1.0 {
        out.cal.r_1q.iter_mut().for_each(|r| *r = scale(*r));
        out.cal.r_ro.iter_mut().for_each(|r| *r = scale(*r));
        out.cal.r_2q.values_mut().for_each(|r| *r = scale(*r));
    }
    if clamped > 0 {
        warn!("scale_noise({level}): {clamped} error rate(s) clamped to {NOISE_ERROR_CAP}");
    }
    Ok(out)
}

/// Dense symmetric distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.data[a * self.n + b]
    }

    /// All-pairs shortest paths over `nodes` (device indices) using only
    /// edges whose endpoints both lie in `nodes`; result is indexed by
    /// position within `nodes`.
    pub fn over_subgraph(graph: &CouplingGraph, nodes: &[usize], weight: impl Fn(usize, usize) -> f64) -> Self {
        let n = nodes.len();
        let mut data = vec![f64::INFINITY; n * n];
        let mut local = HashMap::with_capacity(n);
        for (i, &q) in nodes.iter().enumerate() {
            local.insert(q, i);
            data[i * n + i] = 0.0;
        }
        for (i, &q) in nodes.iter().enumerate() {
            for &nb in graph.neighbors(q) {
                if let Some(&j) = local.get(&nb) {
                    data[i * n + j] = weight(q, nb);
                }
            }
        }
        // Floyd-Warshall; devices are small.
        for k in 0..n {
            for i in 0..n {
                let dik = data[i * n + k];
                if dik.is_infinite() {
                    continue;
                }
                for j in 0..n {
                    let cand = dik + data[k * n + j];
                    if cand < data[i * n + j] {
                        data[i * n + j] = cand;
                    }
                }
            }
        }
        DistanceMatrix { n, data }
    }
}

/// Edge weight of the noise-aware metric.
pub fn noise_weight(hw: &HardwareModel, a: usize, b: usize) -> f64 {
    let r = hw.cal.two_qubit(a, b).unwrap_or(0.0);
    1.0 + NOISE_DISTANCE_WEIGHT * (1.0 - r)
}

/// Hop counts, or shortest paths under `1 + 10 (1 - r_2q)` edge weights.
/// Disconnected pairs are infinite.
pub fn distance_matrix(hw: &HardwareModel, noise_aware: bool) -> DistanceMatrix {
    let nodes: Vec<usize> = (0..hw.num_qubits()).collect();
    if noise_aware {
        DistanceMatrix::over_subgraph(&hw.graph, &nodes, |a, b| noise_weight(hw, a, b))
    } else {
        DistanceMatrix::over_subgraph(&hw.graph, &nodes, |_, _| 1.0)
    }
}
