//! Reference implementations for verification: a noiseless statevector
//! simulator, a routing equivalence check and an exhaustive mapping search.
//!
//! Qubit 0 is the least significant bit of an amplitude index.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{expand_composites, Circuit, GateKind, GateOp};
use crate::error::OracleError;
use crate::fidelity::epst_star;
use crate::hardware::HardwareModel;
use crate::mapper::{route, Mapping, RoutedCircuit, RoutingOptions};

pub const MAX_STATE_QUBITS: usize = 12;
pub const MAX_BRUTE_FORCE_PARTITION: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(n: usize) -> Result<Self, OracleError> {
        if n > MAX_STATE_QUBITS {
            return Err(OracleError::TooWide {
                width: n,
                limit: MAX_STATE_QUBITS,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `|<self|other>|`.
    pub fn overlap(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm()
    }

    fn apply_1q(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let bit = 1 << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    fn apply_cx(&mut self, c: usize, t: usize) {
        let (cb, tb) = (1 << c, 1 << t);
        for i in 0..self.amps.len() {
            if i & cb != 0 && i & tb == 0 {
                self.amps.swap(i, i | tb);
            }
        }
    }

    fn apply_swap(&mut self, a: usize, b: usize) {
        let (ab, bb) = (1 << a, 1 << b);
        for i in 0..self.amps.len() {
            if i & ab != 0 && i & bb == 0 {
                self.amps.swap(i, i ^ ab ^ bb);
            }
        }
    }

    fn apply_cz(&mut self, a: usize, b: usize) {
        let mask = (1 << a) | (1 << b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = -*amp;
            }
        }
    }

    /// Applies one gate; measurements and barriers are ignored.
    pub fn apply(&mut self, gate: &GateOp) {
        let q = &gate.qubits;
        let c = Complex64::new;
        match gate.kind {
            GateKind::X => self.apply_1q(q[0], [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]),
            GateKind::Sx => self.apply_1q(q[0], [[c(0.5, 0.5), c(0.5, -0.5)], [c(0.5, -0.5), c(0.5, 0.5)]]),
            GateKind::Rz(theta) => self.apply_1q(
                q[0],
                [
                    [Complex64::from_polar(1.0, -theta / 2.0), c(0.0, 0.0)],
                    [c(0.0, 0.0), Complex64::from_polar(1.0, theta / 2.0)],
                ],
            ),
            GateKind::Cx => self.apply_cx(q[0], q[1]),
            GateKind::Cz => self.apply_cz(q[0], q[1]),
            GateKind::Swap => self.apply_swap(q[0], q[1]),
            // A bridge acts as a CX between its end qubits.
            GateKind::Bridge => self.apply_cx(q[0], q[2]),
            GateKind::Measure | GateKind::Barrier => {}
        }
    }

    pub fn run(&mut self, circuit: &Circuit) {
        for g in circuit.gates() {
            self.apply(g);
        }
    }

    /// Moves qubit `i` to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> StateVector {
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (i, &a) in self.amps.iter().enumerate() {
            let mut j = 0;
            for (q, &p) in perm.iter().enumerate() {
                if i >> q & 1 == 1 {
                    j |= 1 << p;
                }
            }
            amps[j] = a;
        }
        StateVector { n: self.n, amps }
    }
}

/// State of `circuit` applied to |0...0>.
pub fn simulate_state(circuit: &Circuit) -> Result<StateVector, OracleError> {
    let mut s = StateVector::zero(circuit.num_qubits())?;
    s.run(circuit);
    Ok(s)
}

/// Random entangling preparation, so equivalence is not only checked on |0>.
fn scrambler(n: usize, seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gates = Vec::new();
    for _ in 0..2 {
        for q in 0..n {
            gates.push(GateOp::sx(q));
            gates.push(GateOp::rz(rng.random_range(-3.0..3.0), q));
        }
        for q in 0..n.saturating_sub(1) {
            gates.push(GateOp::cx(q, q + 1));
        }
    }
    Circuit::new(n, gates).expect("scrambler gates are valid")
}

/// Checks that the routed circuit implements the original one up to the
/// qubit permutation from initial to final mapping, on |0> and on scrambled
/// inputs, comparing overlaps against `1 - tol`.
pub fn equivalent_under_permutation(original: &Circuit, routed: &RoutedCircuit, tol: f64) -> Result<bool, OracleError> {
    let n = original.num_qubits();
    let image = routed.initial_mapping.physical_qubits();
    if image.len() != n || routed.final_mapping.len() != n {
        return Err(OracleError::WidthMismatch {
            original: n,
            routed: image.len(),
        });
    }
    if n > MAX_STATE_QUBITS {
        return Err(OracleError::TooWide {
            width: n,
            limit: MAX_STATE_QUBITS,
        });
    }
    // Compact basis: position i holds the physical qubit logical i started on.
    let local = |p: usize| image.iter().position(|&x| x == p);
    let mut compact = Vec::with_capacity(routed.circuit.len());
    for g in expand_composites(&routed.circuit).gates() {
        let qubits: Option<Vec<usize>> = g.qubits.iter().map(|&p| local(p)).collect();
        let Some(qubits) = qubits else {
            return Ok(false);
        };
        compact.push(GateOp {
            kind: g.kind,
            qubits,
            duration_ns: g.duration_ns,
        });
    }
    let compact = Circuit::new(n, compact).map_err(|_| OracleError::WidthMismatch {
        original: n,
        routed: image.len(),
    })?;
    let perm: Option<Vec<usize>> = (0..n).map(|l| local(routed.final_mapping.physical(l))).collect();
    let Some(perm) = perm else {
        return Ok(false);
    };

    for seed in 0..3u64 {
        let mut input = StateVector::zero(n)?;
        if seed > 0 {
            input.run(&scrambler(n, seed));
        }
        let mut expected = input.clone();
        expected.run(original);
        let expected = expected.permuted(&perm);
        let mut actual = input;
        actual.run(&compact);
        if expected.overlap(&actual) < 1.0 - tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// EPST*-maximal initial mapping over every permutation of `partition`,
/// each routed with `opts`. Ties keep the lexicographically first mapping.
pub fn brute_force_mapping_argmax(
    circuit: &Circuit,
    partition: &[usize],
    hw: &HardwareModel,
    opts: &RoutingOptions,
) -> Result<(Mapping, f64), OracleError> {
    let scores = all_mapping_scores(circuit, partition, hw, opts)?;
    let mut best: Option<(Mapping, f64)> = None;
    for (m, s) in scores {
        if best.as_ref().is_none_or(|(_, b)| s > *b) {
            best = Some((m, s));
        }
    }
    Ok(best.expect("at least one permutation"))
}

/// EPST* of every initial mapping onto `partition`, in lexicographic order.
pub fn all_mapping_scores(
    circuit: &Circuit,
    partition: &[usize],
    hw: &HardwareModel,
    opts: &RoutingOptions,
) -> Result<Vec<(Mapping, f64)>, OracleError> {
    if partition.len() > MAX_BRUTE_FORCE_PARTITION {
        return Err(OracleError::PartitionTooLarge {
            size: partition.len(),
            limit: MAX_BRUTE_FORCE_PARTITION,
        });
    }
    if partition.len() != circuit.num_qubits() {
        return Err(OracleError::WidthMismatch {
            original: circuit.num_qubits(),
            routed: partition.len(),
        });
    }
    let mut sorted = partition.to_vec();
    sorted.sort_unstable();
    let mut out = Vec::new();
    let mut perm = sorted.clone();
    loop {
        let m = Mapping::new(perm.clone())?;
        let r = route(circuit, partition, &m, hw, opts)?;
        let s = epst_star(&r.circuit, &m, hw)?.epst_star;
        out.push((m, s));
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(out)
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot has a successor");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
