//! Gate-list circuit IR and the operations the scheduler needs on it:
//! reversal, composite expansion, gate counting and circuit duration.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dag::CircuitDag;
use crate::error::CircuitError;

/// Gate kinds understood by the toolchain.
///
/// `Swap` and `Bridge` are compiler-internal composites inserted by routing;
/// [`expand_composites`] lowers them to `Cx`. A `Bridge` acts on
/// `(control, middle, target)` and has the net effect of `Cx(control, target)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    X,
    Sx,
    Rz(f64),
    Cz,
    Cx,
    Swap,
    Bridge,
    Measure,
    Barrier,
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::Sx => "sx",
            GateKind::Rz(_) => "rz",
            GateKind::Cz => "cz",
            GateKind::Cx => "cx",
            GateKind::Swap => "swap",
            GateKind::Bridge => "bridge",
            GateKind::Measure => "measure",
            GateKind::Barrier => "barrier",
        }
    }

    /// Fixed arity, or `None` for barriers (any non-empty qubit list).
    pub fn arity(&self) -> Option<usize> {
        match self {
            GateKind::X | GateKind::Sx | GateKind::Rz(_) | GateKind::Measure => Some(1),
            GateKind::Cz | GateKind::Cx | GateKind::Swap => Some(2),
            GateKind::Bridge => Some(3),
            GateKind::Barrier => None,
        }
    }

    pub fn is_single_qubit_gate(&self) -> bool {
        matches!(self, GateKind::X | GateKind::Sx | GateKind::Rz(_))
    }

    /// Native two-qubit gates (composites excluded).
    pub fn is_two_qubit_gate(&self) -> bool {
        matches!(self, GateKind::Cx | GateKind::Cz)
    }

    pub fn is_composite(&self) -> bool {
        matches!(self, GateKind::Swap | GateKind::Bridge)
    }

    pub fn from_name(name: &str, theta: Option<f64>) -> Option<GateKind> {
        Some(match name {
            "x" => GateKind::X,
            "sx" => GateKind::Sx,
            "rz" => GateKind::Rz(theta?),
            "cz" => GateKind::Cz,
            "cx" => GateKind::Cx,
            "swap" => GateKind::Swap,
            "bridge" => GateKind::Bridge,
            "measure" => GateKind::Measure,
            "barrier" => GateKind::Barrier,
            _ => return None,
        })
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::Rz(theta) => write!(f, "rz({theta})"),
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateOp {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    /// Per-gate override; normally resolved from the device's duration table.
    pub duration_ns: Option<f64>,
}

impl GateOp {
    pub fn new(kind: GateKind, qubits: Vec<usize>) -> Self {
        GateOp {
            kind,
            qubits,
            duration_ns: None,
        }
    }

    pub fn x(q: usize) -> Self {
        Self::new(GateKind::X, vec![q])
    }
    pub fn sx(q: usize) -> Self {
        Self::new(GateKind::Sx, vec![q])
    }
    pub fn rz(theta: f64, q: usize) -> Self {
        Self::new(GateKind::Rz(theta), vec![q])
    }
    pub fn cx(control: usize, target: usize) -> Self {
        Self::new(GateKind::Cx, vec![control, target])
    }
    pub fn cz(a: usize, b: usize) -> Self {
        Self::new(GateKind::Cz, vec![a, b])
    }
    pub fn swap(a: usize, b: usize) -> Self {
        Self::new(GateKind::Swap, vec![a, b])
    }
    pub fn bridge(control: usize, middle: usize, target: usize) -> Self {
        Self::new(GateKind::Bridge, vec![control, middle, target])
    }
    pub fn measure(q: usize) -> Self {
        Self::new(GateKind::Measure, vec![q])
    }
    pub fn barrier(qubits: Vec<usize>) -> Self {
        Self::new(GateKind::Barrier, qubits)
    }

    fn validate(&self, n: usize) -> Result<(), CircuitError> {
        let kind = self.kind.name();
        match self.kind.arity() {
            Some(expected) if expected != self.qubits.len() => {
                return Err(CircuitError::Arity {
                    kind,
                    expected,
                    got: self.qubits.len(),
                })
            }
            None if self.qubits.is_empty() => {
                return Err(CircuitError::Arity {
                    kind,
                    expected: 1,
                    got: 0,
                })
            }
            _ => {}
        }
        for (i, &q) in self.qubits.iter().enumerate() {
            if q >= n {
                return Err(CircuitError::QubitOutOfRange { qubit: q, n });
            }
            if self.qubits[..i].contains(&q) {
                return Err(CircuitError::DuplicateQubit { kind, qubit: q });
            }
        }
        if let GateKind::Rz(theta) = self.kind {
            if !theta.is_finite() {
                return Err(CircuitError::Json(format!("non-finite rz angle {theta}")));
            }
        }
        if let Some(d) = self.duration_ns {
            if !(d.is_finite() && d >= 0.0) {
                return Err(CircuitError::InvalidDuration { kind, value: d });
            }
        }
        Ok(())
    }
}

/// A circuit over `n` logical qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n: usize,
    gates: Vec<GateOp>,
}

impl Circuit {
    pub fn new(n: usize, gates: Vec<GateOp>) -> Result<Self, CircuitError> {
        for g in &gates {
            g.validate(n)?;
        }
        Ok(Circuit { n, gates })
    }

    pub fn empty(n: usize) -> Self {
        Circuit {
            n,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: GateOp) -> Result<(), CircuitError> {
        gate.validate(self.n)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[GateOp] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn has_measurements(&self) -> bool {
        self.gates.iter().any(|g| g.kind == GateKind::Measure)
    }

    /// Circuits without explicit measurements are treated as measuring every qubit.
    pub fn with_implicit_measures(&self) -> Circuit {
        if self.has_measurements() {
            return self.clone();
        }
        let mut out = self.clone();
        out.gates.extend((0..self.n).map(GateOp::measure));
        out
    }

    pub fn count_single_qubit(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| g.kind.is_single_qubit_gate())
            .count()
    }

    /// Two-qubit gate count after composite expansion (SWAP = 3, BRIDGE = 4).
    pub fn count_two_qubit(&self) -> usize {
        self.gates
            .iter()
            .map(|g| match g.kind {
                GateKind::Cx | GateKind::Cz => 1,
                GateKind::Swap => 3,
                GateKind::Bridge => 4,
                _ => 0,
            })
            .sum()
    }

    /// Readout count under the measure-all convention.
    pub fn count_readout(&self) -> usize {
        let explicit = self
            .gates
            .iter()
            .filter(|g| g.kind == GateKind::Measure)
            .count();
        if explicit == 0 {
            self.n
        } else {
            explicit
        }
    }

    /// Degree of each logical qubit in the interaction graph (pairs sharing any
    /// multi-qubit gate other than barriers).
    pub fn interaction_degrees(&self) -> Vec<usize> {
        let mut adjacent = vec![vec![false; self.n]; self.n];
        for g in &self.gates {
            if g.kind.is_two_qubit_gate() || g.kind.is_composite() {
                for (i, &a) in g.qubits.iter().enumerate() {
                    for &b in &g.qubits[i + 1..] {
                        adjacent[a][b] = true;
                        adjacent[b][a] = true;
                    }
                }
            }
        }
        adjacent
            .iter()
            .map(|row| row.iter().filter(|&&x| x).count())
            .collect()
    }

    pub fn max_logical_degree(&self) -> usize {
        self.interaction_degrees().into_iter().max().unwrap_or(0)
    }

    /// Layer count ignoring barriers and measurements.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.n];
        for g in &self.gates {
            if matches!(g.kind, GateKind::Barrier | GateKind::Measure) {
                continue;
            }
            let next = g.qubits.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
            for &q in &g.qubits {
                level[q] = next;
            }
        }
        level.into_iter().max().unwrap_or(0)
    }

    /// Re-labels qubits through `map` onto a `width`-qubit register.
    pub fn relabel(&self, width: usize, map: impl Fn(usize) -> usize) -> Result<Circuit, CircuitError> {
        let gates = self
            .gates
            .iter()
            .map(|g| GateOp {
                kind: g.kind,
                qubits: g.qubits.iter().map(|&q| map(q)).collect(),
                duration_ns: g.duration_ns,
            })
            .collect();
        Circuit::new(width, gates)
    }
}

/// Gate durations of a device, by gate class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateDurations {
    #[serde(rename = "1q")]
    pub one_qubit_ns: f64,
    #[serde(rename = "2q")]
    pub two_qubit_ns: f64,
    #[serde(rename = "measure")]
    pub measure_ns: f64,
}

impl Default for GateDurations {
    fn default() -> Self {
        GateDurations {
            one_qubit_ns: 50.0,
            two_qubit_ns: 300.0,
            measure_ns: 1000.0,
        }
    }
}

impl GateDurations {
    /// Duration of a non-composite gate. Composites are timed through their expansion.
    pub fn of(&self, gate: &GateOp) -> Result<f64, CircuitError> {
        let kind = gate.kind.name();
        let d = match gate.duration_ns {
            Some(d) => d,
            None => match gate.kind {
                GateKind::X | GateKind::Sx | GateKind::Rz(_) => self.one_qubit_ns,
                GateKind::Cx | GateKind::Cz => self.two_qubit_ns,
                GateKind::Measure => self.measure_ns,
                GateKind::Barrier => 0.0,
                GateKind::Swap => 3.0 * self.two_qubit_ns,
                GateKind::Bridge => 4.0 * self.two_qubit_ns,
            },
        };
        if d.is_finite() && d >= 0.0 {
            Ok(d)
        } else {
            Err(CircuitError::InvalidDuration { kind, value: d })
        }
    }
}

/// Advances the per-qubit clocks by one gate.
fn advance_clocks(clock: &mut [f64], gate: &GateOp, durations: &GateDurations) -> Result<(), CircuitError> {
    match gate.kind {
        GateKind::Swap | GateKind::Bridge if gate.duration_ns.is_none() => {
            for sub in expand_gate(gate) {
                advance_clocks(clock, &sub, durations)?;
            }
        }
        _ => {
            let d = durations.of(gate)?;
            let start = gate
                .qubits
                .iter()
                .map(|&q| clock[q])
                .fold(0.0_f64, f64::max);
            for &q in &gate.qubits {
                clock[q] = start + d;
            }
        }
    }
    Ok(())
}

/// Circuit makespan in nanoseconds.
///
/// Per-qubit clocks are advanced while the dependency DAG is drained in
/// topological order: a one-qubit gate advances its qubit's clock, a
/// multi-qubit gate first synchronises all its clocks to their maximum.
/// The result is the largest clock.
pub fn circuit_time(circuit: &Circuit, durations: &GateDurations) -> Result<f64, CircuitError> {
    let dag = CircuitDag::build(circuit);
    let mut in_degree: Vec<usize> = (0..dag.len()).map(|i| dag.predecessors(i).len()).collect();
    let mut queue: VecDeque<usize> = (0..dag.len()).filter(|&i| in_degree[i] == 0).collect();
    let mut clock = vec![0.0_f64; circuit.num_qubits()];
    while let Some(g) = queue.pop_front() {
        advance_clocks(&mut clock, &circuit.gates[g], durations)?;
        for &s in dag.successors(g) {
            in_degree[s] -= 1;
            if in_degree[s] == 0 {
                queue.push_back(s);
            }
        }
    }
    Ok(clock.into_iter().fold(0.0, f64::max))
}

/// Reverses the gate order. Measurements are stripped first and re-appended
/// after the reversed body, so the result still ends in readout.
pub fn reverse_circuit(circuit: &Circuit) -> Circuit {
    let (measures, mut body): (Vec<GateOp>, Vec<GateOp>) = circuit
        .gates
        .iter()
        .cloned()
        .partition(|g| g.kind == GateKind::Measure);
    body.reverse();
    body.extend(measures);
    Circuit {
        n: circuit.n,
        gates: body,
    }
}

fn expand_gate(gate: &GateOp) -> Vec<GateOp> {
    match (gate.kind, gate.qubits.as_slice()) {
        (GateKind::Swap, &[a, b]) => vec![GateOp::cx(a, b), GateOp::cx(b, a), GateOp::cx(a, b)],
        (GateKind::Bridge, &[c, m, t]) => vec![
            GateOp::cx(m, t),
            GateOp::cx(c, m),
            GateOp::cx(m, t),
            GateOp::cx(c, m),
        ],
        _ => vec![gate.clone()],
    }
}

/// Lowers SWAP and BRIDGE gates to CX sequences.
pub fn expand_composites(circuit: &Circuit) -> Circuit {
    Circuit {
        n: circuit.n,
        gates: circuit.gates.iter().flat_map(expand_gate).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JobId(pub u64);

impl fmt::Display for JobId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A circuit, a shot count and a submission time.
#[derive(Debug, Clone, PartialEq)]
pub struct Job {
    pub id: JobId,
    pub circuit: Circuit,
    pub shots: u64,
    pub submit_time: f64,
}

impl Job {
    pub fn new(id: JobId, circuit: Circuit, shots: u64, submit_time: f64) -> Result<Self, CircuitError> {
        if shots == 0 {
            return Err(CircuitError::InvalidJob(format!("job {id}: shots must be >= 1")));
        }
        if !(submit_time.is_finite() && submit_time >= 0.0) {
            return Err(CircuitError::InvalidJob(format!(
                "job {id}: submit time {submit_time} must be finite and non-negative"
            )));
        }
        Ok(Job {
            id,
            circuit,
            shots,
            submit_time,
        })
    }

    pub fn width(&self) -> usize {
        self.circuit.num_qubits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear_scan_time(c: &Circuit, d: &GateDurations) -> f64 {
        let mut clock = vec![0.0_f64; c.num_qubits()];
        for g in expand_composites(c).gates() {
            let dur = d.of(g).unwrap();
            let start = g.qubits.iter().map(|&q| clock[q]).fold(0.0, f64::max);
            for &q in &g.qubits {
                clock[q] = start + dur;
            }
        }
        clock.into_iter().fold(0.0, f64::max)
    }

    #[test]
    fn circuit_time_hand_traces() {
        let d = GateDurations::default();
        assert_eq!(circuit_time(&Circuit::empty(3), &d).unwrap(), 0.0);
        let c = Circuit::new(2, vec![GateOp::x(0), GateOp::cx(0, 1)]).unwrap();
        assert_eq!(circuit_time(&c, &d).unwrap(), 350.0);
        let c = Circuit::new(2, vec![GateOp::x(0), GateOp::x(1)]).unwrap();
        assert_eq!(circuit_time(&c, &d).unwrap(), 50.0);
    }

    #[test]
    fn circuit_time_barrier_synchronises() {
        let d = GateDurations::default();
        let c = Circuit::new(
            2,
            vec![GateOp::x(0), GateOp::x(0), GateOp::barrier(vec![0, 1]), GateOp::x(1)],
        )
        .unwrap();
        assert_eq!(circuit_time(&c, &d).unwrap(), 150.0);
    }

    #[test]
    fn circuit_time_rejects_bad_duration() {
        let d = GateDurations::default();
        let mut g = GateOp::x(0);
        g.duration_ns = Some(-1.0);
        assert!(Circuit::new(1, vec![g]).is_err());
        let bad = GateDurations {
            one_qubit_ns: f64::NAN,
            ..d
        };
        let c = Circuit::new(1, vec![GateOp::x(0)]).unwrap();
        assert!(matches!(
            circuit_time(&c, &bad),
            Err(CircuitError::InvalidDuration { .. })
        ));
    }

    #[test]
    fn circuit_time_composite_matches_expansion() {
        let d = GateDurations::default();
        let c = Circuit::new(3, vec![GateOp::x(0), GateOp::bridge(0, 1, 2), GateOp::swap(1, 2)]).unwrap();
        assert_eq!(
            circuit_time(&c, &d).unwrap(),
            circuit_time(&expand_composites(&c), &d).unwrap()
        );
        assert_eq!(circuit_time(&c, &d).unwrap(), linear_scan_time(&c, &d));
    }

    #[test]
    fn reverse_examples() {
        let c = Circuit::new(2, vec![GateOp::cx(0, 1), GateOp::x(0)]).unwrap();
        let r = reverse_circuit(&c);
        assert_eq!(r.gates(), &[GateOp::x(0), GateOp::cx(0, 1)]);
        let single = Circuit::new(1, vec![GateOp::x(0)]).unwrap();
        assert_eq!(reverse_circuit(&single), single);
    }

    #[test]
    fn reverse_keeps_measurements_last() {
        let c = Circuit::new(
            2,
            vec![GateOp::x(0), GateOp::cx(0, 1), GateOp::measure(0), GateOp::measure(1)],
        )
        .unwrap();
        let r = reverse_circuit(&c);
        assert_eq!(
            r.gates(),
            &[GateOp::cx(0, 1), GateOp::x(0), GateOp::measure(0), GateOp::measure(1)]
        );
        assert_eq!(reverse_circuit(&r), c);
    }

    #[test]
    fn expand_examples() {
        let s = Circuit::new(2, vec![GateOp::swap(0, 1)]).unwrap();
        assert_eq!(
            expand_composites(&s).gates(),
            &[GateOp::cx(0, 1), GateOp::cx(1, 0), GateOp::cx(0, 1)]
        );
        let b = Circuit::new(3, vec![GateOp::bridge(0, 1, 2)]).unwrap();
        let e = expand_composites(&b);
        assert_eq!(e.len(), 4);
        assert!(e.gates().iter().all(|g| g.kind == GateKind::Cx));
        let plain = Circuit::new(2, vec![GateOp::x(0), GateOp::cx(0, 1)]).unwrap();
        assert_eq!(expand_composites(&plain), plain);
    }

    #[test]
    fn bridge_expansion_is_cx_on_basis_states() {
        // CX sequences permute basis states, so a classical check is exact.
        let e = expand_composites(&Circuit::new(3, vec![GateOp::bridge(0, 1, 2)]).unwrap());
        for input in 0u8..8 {
            let mut bits = [input & 1, (input >> 1) & 1, (input >> 2) & 1];
            for g in e.gates() {
                bits[g.qubits[1]] ^= bits[g.qubits[0]];
            }
            let expected = [input & 1, (input >> 1) & 1, ((input >> 2) & 1) ^ (input & 1)];
            assert_eq!(bits, expected, "input {input:03b}");
        }
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            Circuit::new(2, vec![GateOp::new(GateKind::Cx, vec![0])]),
            Err(CircuitError::Arity { expected: 2, got: 1, .. })
        ));
        assert!(matches!(
            Circuit::new(2, vec![GateOp::x(2)]),
            Err(CircuitError::QubitOutOfRange { qubit: 2, n: 2 })
        ));
        assert!(matches!(
            Circuit::new(2, vec![GateOp::cx(1, 1)]),
            Err(CircuitError::DuplicateQubit { .. })
        ));
        assert!(Job::new(JobId(1), Circuit::empty(1), 0, 0.0).is_err());
        assert!(Job::new(JobId(1), Circuit::empty(1), 1, -1.0).is_err());
    }

    #[test]
    fn counts_and_measure_all_convention() {
        let c = Circuit::new(3, vec![GateOp::x(0), GateOp::swap(0, 1), GateOp::cx(1, 2)]).unwrap();
        assert_eq!(c.count_single_qubit(), 1);
        assert_eq!(c.count_two_qubit(), 4);
        assert_eq!(c.count_readout(), 3);
        let m = c.with_implicit_measures();
        assert_eq!(m.count_readout(), 3);
        assert_eq!(m.len(), 6);
        assert_eq!(c.interaction_degrees(), vec![1, 2, 1]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        pub(crate) fn arb_gate(n: usize) -> impl Strategy<Value = GateOp> {
            let q = 0..n;
            prop_oneof![
                q.clone().prop_map(GateOp::x),
                q.clone().prop_map(GateOp::sx),
                (q.clone(), -3.0..3.0f64).prop_map(|(q, t)| GateOp::rz(t, q)),
                (q.clone(), q.clone())
                    .prop_filter("distinct", |(a, b)| a != b)
                    .prop_map(|(a, b)| GateOp::cx(a, b)),
                (q.clone(), q.clone())
                    .prop_filter("distinct", |(a, b)| a != b)
                    .prop_map(|(a, b)| GateOp::cz(a, b)),
                q.clone().prop_map(GateOp::measure),
            ]
        }

        fn arb_circuit() -> impl Strategy<Value = Circuit> {
            (2usize..7).prop_flat_map(|n| {
                proptest::collection::vec(arb_gate(n), 0..40)
                    .prop_map(move |gates| Circuit::new(n, gates).unwrap())
            })
        }

        proptest! {
            #[test]
            fn time_matches_linear_scan(c in arb_circuit()) {
                let d = GateDurations::default();
                prop_assert_eq!(circuit_time(&c, &d).unwrap(), linear_scan_time(&c, &d));
            }

            #[test]
            fn time_is_monotone_under_append(c in arb_circuit(), q in 0usize..2) {
                let d = GateDurations::default();
                let before = circuit_time(&c, &d).unwrap();
                let mut longer = c.clone();
                longer.push(GateOp::x(q)).unwrap();
                prop_assert!(circuit_time(&longer, &d).unwrap() >= before);
            }

            #[test]
            fn double_reverse_is_identity_modulo_measures(c in arb_circuit()) {
                let rr = reverse_circuit(&reverse_circuit(&c));
                let strip = |c: &Circuit| c.gates().iter().filter(|g| g.kind != GateKind::Measure).cloned().collect::<Vec<_>>();
                prop_assert_eq!(strip(&rr), strip(&c));
            }
        }
    }
}
