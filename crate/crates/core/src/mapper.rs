//! Qubit mapping: noise-aware initial placement and SWAP/BRIDGE routing.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{expand_composites, reverse_circuit, Circuit, GateKind, GateOp};
use crate::dag::CircuitDag;
use crate::error::MapperError;
use crate::fidelity::epst_star;
use crate::hardware::{noise_weight, DistanceMatrix, HardwareModel};

/// Logical-to-physical assignment; injective.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Mapping {
    l2p: Vec<usize>,
}

impl Mapping {
    pub fn new(l2p: Vec<usize>) -> Result<Self, MapperError> {
        for (i, p) in l2p.iter().enumerate() {
            if l2p[..i].contains(p) {
                return Err(MapperError::InvalidMapping(format!(
                    "physical qubit {p} assigned twice"
                )));
            }
        }
        Ok(Mapping { l2p })
    }

    pub fn len(&self) -> usize {
        self.l2p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.l2p.is_empty()
    }

    pub fn physical(&self, logical: usize) -> usize {
        self.l2p[logical]
    }

    /// Image of the mapping, indexed by logical qubit.
    pub fn physical_qubits(&self) -> &[usize] {
        &self.l2p
    }

    pub fn logical(&self, physical: usize) -> Option<usize> {
        self.l2p.iter().position(|&p| p == physical)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoutedCircuit {
    /// Circuit over device qubits.
    pub circuit: Circuit,
    pub initial_mapping: Mapping,
    pub final_mapping: Mapping,
    pub swaps: usize,
    pub bridges: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoutingOptions {
    pub allow_bridge: bool,
    /// Weight distances by two-qubit error instead of hop count.
    pub noise_aware: bool,
    pub extended_set_size: usize,
    pub lookahead_weight: f64,
    pub decay_delta: f64,
    pub decay_reset: usize,
}

impl Default for RoutingOptions {
    fn default() -> Self {
        RoutingOptions {
            allow_bridge: true,
            noise_aware: true,
            extended_set_size: 20,
            lookahead_weight: 0.5,
            decay_delta: 0.001,
            decay_reset: 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Move {
    /// Local indices, `a < b` by device index.
    Swap(usize, usize),
    /// Front gate index and local (control, middle, target).
    Bridge(usize, usize, usize, usize),
}

/// Routing state over the partition's local index space.
struct Router<'a> {
    hw: &'a HardwareModel,
    opts: &'a RoutingOptions,
    circuit: Circuit,
    dag: CircuitDag,
    nodes: Vec<usize>,
    dist: DistanceMatrix,
    adjacent: Vec<Vec<bool>>,
    /// logical -> local physical
    layout: Vec<usize>,
    remaining_preds: Vec<usize>,
    done: Vec<bool>,
    first_pending: usize,
    front: BTreeSet<usize>,
    decay: Vec<f64>,
    out: Vec<GateOp>,
    swaps: usize,
    bridges: usize,
    insertions_since_reset: usize,
}

impl<'a> Router<'a> {
    fn emit(&mut self, gate: usize) {
        let g = &self.circuit.gates()[gate];
        let qubits = g.qubits.iter().map(|&l| self.nodes[self.layout[l]]).collect();
        self.out.push(GateOp {
            kind: g.kind,
            qubits,
            duration_ns: g.duration_ns,
        });
        self.complete(gate);
    }

    fn complete(&mut self, gate: usize) {
        self.done[gate] = true;
        self.front.remove(&gate);
        for &s in self.dag.successors(gate) {
            self.remaining_preds[s] -= 1;
            if self.remaining_preds[s] == 0 {
                self.front.insert(s);
            }
        }
        while self.first_pending < self.done.len() && self.done[self.first_pending] {
            self.first_pending += 1;
        }
    }

    fn executable(&self, gate: usize) -> bool {
        let g = &self.circuit.gates()[gate];
        if g.kind.is_two_qubit_gate() {
            self.adjacent[self.layout[g.qubits[0]]][self.layout[g.qubits[1]]]
        } else {
            true
        }
    }

    /// Emits executable front gates until only blocked two-qubit gates remain.
    fn drain(&mut self) -> bool {
        let mut progressed = false;
        loop {
            let ready: Vec<usize> = self.front.iter().copied().filter(|&g| self.executable(g)).collect();
            if ready.is_empty() {
                return progressed;
            }
            progressed = true;
            for g in ready {
                self.emit(g);
            }
        }
    }

    fn pair(&self, gate: usize) -> (usize, usize) {
        let q = &self.circuit.gates()[gate].qubits;
        (q[0], q[1])
    }

    fn extended_set(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.opts.extended_set_size);
        for i in self.first_pending..self.done.len() {
            if out.len() >= self.opts.extended_set_size {
                break;
            }
            if !self.done[i] && !self.front.contains(&i) && self.circuit.gates()[i].kind.is_two_qubit_gate() {
                out.push(i);
            }
        }
        out
    }

    fn layer_cost(&self, gates: &[usize], layout: &[usize], skip: Option<usize>, norm: usize) -> f64 {
        if norm == 0 {
            return 0.0;
        }
        let sum: f64 = gates
            .iter()
            .filter(|&&g| Some(g) != skip)
            .map(|&g| {
                let (a, b) = self.pair(g);
                self.dist.get(layout[a], layout[b])
            })
            .sum();
        sum / norm as f64
    }

    fn edge_error(&self, a: usize, b: usize) -> f64 {
        1.0 - self.hw.cal.two_qubit(self.nodes[a], self.nodes[b]).unwrap_or(0.0)
    }

    fn choose_move(&self) -> Move {
        let front: Vec<usize> = self.front.iter().copied().collect();
        let extended = self.extended_set();
        let w = self.opts.lookahead_weight;
        let base_ext = self.layer_cost(&extended, &self.layout, None, extended.len());

        // (cost, kind rank: bridge 0 / swap 1, device-index key)
        let mut best: Option<(f64, u8, [usize; 3], Move)> = None;
        let mut consider = |cost: f64, rank: u8, key: [usize; 3], mv: Move| {
            let better = match &best {
                None => true,
                Some((c, r, k, _)) => (cost, rank, key).partial_cmp(&(*c, *r, *k)) == Some(std::cmp::Ordering::Less),
            };
            if better {
                best = Some((cost, rank, key, mv));
            }
        };

        let mut candidates = BTreeSet::new();
        for &g in &front {
            let (a, b) = self.pair(g);
            for l in [a, b] {
                let p = self.layout[l];
                for q in 0..self.nodes.len() {
                    if self.adjacent[p][q] {
                        let (x, y) = if self.nodes[p] < self.nodes[q] { (p, q) } else { (q, p) };
                        candidates.insert((self.nodes[x], self.nodes[y], x, y));
                    }
                }
            }
        }
        let mut trial = self.layout.clone();
        for &(_, _, x, y) in &candidates {
            for slot in trial.iter_mut() {
                if *slot == x {
                    *slot = y;
                } else if *slot == y {
                    *slot = x;
                }
            }
            let decay = self.decay[x].max(self.decay[y]);
            let h = self.layer_cost(&front, &trial, None, front.len())
                + w * self.layer_cost(&extended, &trial, None, extended.len());
            let cost = decay * h + 3.0 * self.edge_error(x, y);
            consider(cost, 1, [self.nodes[x], self.nodes[y], 0], Move::Swap(x, y));
            trial.copy_from_slice(&self.layout);
        }

        if self.opts.allow_bridge {
            for &g in &front {
                if self.circuit.gates()[g].kind != GateKind::Cx {
                    continue;
                }
                let (lc, lt) = self.pair(g);
                let (c, t) = (self.layout[lc], self.layout[lt]);
                for m in 0..self.nodes.len() {
                    if m != c && m != t && self.adjacent[c][m] && self.adjacent[m][t] {
                        let decay = self.decay[c].max(self.decay[m]).max(self.decay[t]);
                        // The bridged gate counts as if it had been made adjacent.
                        let resolved = self.dist.get(c, m).min(self.dist.get(m, t)) / front.len() as f64;
                        let h = self.layer_cost(&front, &self.layout, Some(g), front.len()) + resolved + w * base_ext;
                        let cost = decay * h + 2.0 * self.edge_error(c, m) + 2.0 * self.edge_error(m, t);
                        let mut key = [self.nodes[c], self.nodes[t], self.nodes[m]];
                        if key[0] > key[1] {
                            key.swap(0, 1);
                        }
                        consider(cost, 0, key, Move::Bridge(g, c, m, t));
                    }
                }
            }
        }
        best.expect("a connected partition always offers a swap").3
    }

    fn apply_swap(&mut self, x: usize, y: usize) {
        for slot in self.layout.iter_mut() {
            if *slot == x {
                *slot = y;
            } else if *slot == y {
                *slot = x;
            }
        }
        self.out.push(GateOp::swap(self.nodes[x], self.nodes[y]));
        self.swaps += 1;
        self.decay[x] += self.opts.decay_delta;
        self.decay[y] += self.opts.decay_delta;
        self.note_insertion();
    }

    fn note_insertion(&mut self) {
        self.insertions_since_reset += 1;
        if self.insertions_since_reset >= self.opts.decay_reset {
            self.insertions_since_reset = 0;
            self.decay.iter_mut().for_each(|d| *d = 1.0);
        }
    }

    /// Moves the first blocked gate's control along a shortest path until it
    /// is adjacent to its target. Used when the heuristic stops making progress.
    fn force_route(&mut self) {
        let g = *self.front.iter().next().expect("front non-empty");
        let (a, b) = self.pair(g);
        loop {
            let (p, t) = (self.layout[a], self.layout[b]);
            if self.adjacent[p][t] {
                return;
            }
            let next = (0..self.nodes.len())
                .filter(|&q| self.adjacent[p][q])
                .min_by(|&x, &y| {
                    self.dist
                        .get(x, t)
                        .total_cmp(&self.dist.get(y, t))
                        .then(self.nodes[x].cmp(&self.nodes[y]))
                })
                .expect("connected partition");
            let (x, y) = if self.nodes[p] < self.nodes[next] { (p, next) } else { (next, p) };
            self.apply_swap(x, y);
        }
    }

    fn run(mut self) -> (Vec<GateOp>, Vec<usize>, usize, usize) {
        let stall_limit = 2 * self.nodes.len() + 10;
        let mut stalled = 0usize;
        loop {
            if self.drain() {
                stalled = 0;
            }
            if self.front.is_empty() {
                break;
            }
            if stalled >= stall_limit {
                self.force_route();
                stalled = 0;
                continue;
            }
            match self.choose_move() {
                Move::Swap(x, y) => {
                    self.apply_swap(x, y);
                    stalled += 1;
                }
                Move::Bridge(g, c, m, t) => {
                    self.out.push(GateOp::bridge(self.nodes[c], self.nodes[m], self.nodes[t]));
                    self.bridges += 1;
                    self.note_insertion();
                    self.complete(g);
                    stalled = 0;
                }
            }
        }
        let layout = self.layout.iter().map(|&l| self.nodes[l]).collect();
        (self.out, layout, self.swaps, self.bridges)
    }
}

fn check_partition(hw: &HardwareModel, partition: &[usize]) -> Result<(), MapperError> {
    if partition.iter().any(|&p| p >= hw.num_qubits()) {
        return Err(MapperError::InvalidMapping(format!(
            "partition {partition:?} exceeds the device"
        )));
    }
    if partition.is_empty() {
        return Ok(());
    }
    let mut seen = vec![false; partition.len()];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for (j, &q) in partition.iter().enumerate() {
            if !seen[j] && hw.graph.has_edge(partition[i], q) {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    if seen.iter().all(|&s| s) {
        Ok(())
    } else {
        Err(MapperError::DisconnectedPartition(partition.to_vec()))
    }
}

/// Routes `circuit` onto `partition` starting from `initial`.
///
/// Front-layer gates that are executable are emitted as soon as possible.
/// When only non-adjacent two-qubit gates remain, every SWAP on an edge
/// touching a front-layer qubit and every BRIDGE for a distance-two CX is
/// scored by the (decayed) mean front-layer distance plus the weighted mean
/// distance of an extended lookahead set, plus the error of the CXs the
/// inserted gate itself costs. Input SWAP/BRIDGE gates are expanded first.
pub fn route(
    circuit: &Circuit,
    partition: &[usize],
    initial: &Mapping,
    hw: &HardwareModel,
    opts: &RoutingOptions,
) -> Result<RoutedCircuit, MapperError> {
    if initial.len() != circuit.num_qubits() {
        return Err(MapperError::InvalidMapping(format!(
            "mapping covers {} qubits, circuit has {}",
            initial.len(),
            circuit.num_qubits()
        )));
    }
    check_partition(hw, partition)?;
    let layout: Vec<usize> = initial
        .physical_qubits()
        .iter()
        .map(|p| {
            partition.iter().position(|q| q == p).ok_or_else(|| {
                MapperError::InvalidMapping(format!("physical qubit {p} is outside the partition"))
            })
        })
        .collect::<Result<_, _>>()?;

    let circuit = expand_composites(circuit);
    let dag = CircuitDag::build(&circuit);
    let nodes = partition.to_vec();
    let dist = if opts.noise_aware {
        DistanceMatrix::over_subgraph(&hw.graph, &nodes, |a, b| noise_weight(hw, a, b))
    } else {
        DistanceMatrix::over_subgraph(&hw.graph, &nodes, |_, _| 1.0)
    };
    let adjacent = nodes
        .iter()
        .map(|&a| nodes.iter().map(|&b| hw.graph.has_edge(a, b)).collect())
        .collect();
    let remaining_preds: Vec<usize> = (0..dag.len()).map(|g| dag.predecessors(g).len()).collect();
    let front = (0..dag.len()).filter(|&g| remaining_preds[g] == 0).collect();
    let len = circuit.len();
    let router = Router {
        hw,
        opts,
        dag,
        decay: vec![1.0; nodes.len()],
        dist,
        adjacent,
        layout,
        remaining_preds,
        done: vec![false; len],
        first_pending: 0,
        front,
        out: Vec::with_capacity(len),
        swaps: 0,
        bridges: 0,
        insertions_since_reset: 0,
        nodes,
        circuit,
    };
    let (gates, final_layout, swaps, bridges) = router.run();
    Ok(RoutedCircuit {
        circuit: Circuit::new(hw.num_qubits(), gates).map_err(|e| MapperError::InvalidMapping(e.to_string()))?,
        initial_mapping: initial.clone(),
        final_mapping: Mapping::new(final_layout)?,
        swaps,
        bridges,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapperConfig {
    /// Forward/backward refinement iterations.
    pub repeats: usize,
    pub routing: RoutingOptions,
}

impl Default for MapperConfig {
    fn default() -> Self {
        MapperConfig {
            repeats: 3,
            routing: RoutingOptions::default(),
        }
    }
}

/// Best initial mapping found, with its routed circuit and EPST*.
#[derive(Debug, Clone, PartialEq)]
pub struct MappingOutcome {
    pub mapping: Mapping,
    pub routed: RoutedCircuit,
    pub epst_star: f64,
}

/// Noise-aware initial mapping.
///
/// Starts from a random permutation of the partition. Each of the `repeats`
/// iterations routes the circuit forward, routes the reversed circuit from the
/// resulting final mapping, and takes that final mapping as the new initial
/// mapping; the circuit routed from it is scored by EPST*. The best-scoring
/// initial mapping is returned (the random seed mapping if no score beats 0).
pub fn initial_mapping<R: Rng + ?Sized>(
    circuit: &Circuit,
    partition: &[usize],
    hw: &HardwareModel,
    cfg: &MapperConfig,
    rng: &mut R,
) -> Result<MappingOutcome, MapperError> {
    if partition.len() != circuit.num_qubits() {
        return Err(MapperError::InvalidMapping(format!(
            "partition has {} qubits, circuit needs {}",
            partition.len(),
            circuit.num_qubits()
        )));
    }
    let mut perm = partition.to_vec();
    perm.shuffle(rng);
    let seed = Mapping::new(perm)?;
    let mut current = seed.clone();
    let reversed = reverse_circuit(circuit);

    let mut best_score = 0.0;
    let mut best: Option<(Mapping, RoutedCircuit)> = None;
    for _ in 0..cfg.repeats.max(1) {
        let forward = route(circuit, partition, &current, hw, &cfg.routing)?;
        let backward = route(&reversed, partition, &forward.final_mapping, hw, &cfg.routing)?;
        current = backward.final_mapping;
        let routed = route(circuit, partition, &current, hw, &cfg.routing)?;
        let score = epst_star(&routed.circuit, &current, hw)?.epst_star;
        if score > best_score {
            best_score = score;
            best = Some((current.clone(), routed));
        }
    }
    let (mapping, routed) = match best {
        Some(b) => b,
        None => {
            // Every candidate scored zero: keep the seed mapping.
            let routed = route(circuit, partition, &seed, hw, &cfg.routing)?;
            (seed, routed)
        }
    };
    Ok(MappingOutcome {
        mapping,
        routed,
        epst_star: best_score,
    })
}
