//! Greedy allocation of connected qubit regions.

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::fidelity::{fidelity_degree, fidelity_score};
use crate::hardware::HardwareModel;

/// Unallocated qubits of a device during round assembly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemainingGraph {
    available: Vec<bool>,
}

impl RemainingGraph {
    pub fn full(hw: &HardwareModel) -> Self {
        RemainingGraph {
            available: vec![true; hw.num_qubits()],
        }
    }

    pub fn from_available(available: Vec<bool>) -> Self {
        RemainingGraph { available }
    }

    pub fn is_available(&self, q: usize) -> bool {
        self.available[q]
    }

    pub fn available(&self) -> &[bool] {
        &self.available
    }

    pub fn count(&self) -> usize {
        self.available.iter().filter(|&&a| a).count()
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    /// Degree of `q` counting only available neighbours.
    pub fn degree(&self, q: usize, hw: &HardwareModel) -> usize {
        hw.graph.neighbors(q).iter().filter(|&&j| self.available[j]).count()
    }

    /// Marks `qubits` as allocated.
    pub fn allocate(&mut self, qubits: &[usize]) {
        for &q in qubits {
            debug_assert!(self.available[q], "qubit {q} allocated twice");
            self.available[q] = false;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    /// Sorted physical qubits.
    pub qubits: Vec<usize>,
    pub score: f64,
    pub starting_point: usize,
}

/// Qubits whose remaining degree exceeds the circuit's largest logical
/// degree, or the maximal-degree qubits when none does.
pub fn starting_points(remaining: &RemainingGraph, circuit: &Circuit, hw: &HardwareModel) -> Vec<usize> {
    let degrees: Vec<(usize, usize)> = (0..hw.num_qubits())
        .filter(|&q| remaining.is_available(q))
        .map(|q| (q, remaining.degree(q, hw)))
        .collect();
    let need = circuit.max_logical_degree();
    let above: Vec<usize> = degrees.iter().filter(|&&(_, d)| d > need).map(|&(q, _)| q).collect();
    if !above.is_empty() {
        return above;
    }
    let max = degrees.iter().map(|&(_, d)| d).max().unwrap_or(0);
    degrees.iter().filter(|&&(_, d)| d == max).map(|&(q, _)| q).collect()
}

/// Grows a region of `width` qubits from `start`, each step adding the
/// frontier qubit of highest fidelity degree (lowest index on ties).
/// Returns the sorted qubits, or `None` if the component is too small.
pub fn grow_partition(start: usize, width: usize, remaining: &RemainingGraph, hw: &HardwareModel) -> Option<Vec<usize>> {
    if width == 0 || !remaining.is_available(start) {
        return None;
    }
    let n = hw.num_qubits();
    let mut inside = vec![false; n];
    inside[start] = true;
    let mut qubits = vec![start];
    let degree: Vec<f64> = (0..n)
        .map(|q| if remaining.is_available(q) { fidelity_degree(q, remaining.available(), hw) } else { 0.0 })
        .collect();
    while qubits.len() < width {
        let mut best: Option<usize> = None;
        for &q in &qubits {
            for &j in hw.graph.neighbors(q) {
                if inside[j] || !remaining.is_available(j) {
                    continue;
                }
                best = match best {
                    Some(b) if degree[b] > degree[j] || (degree[b] == degree[j] && b < j) => Some(b),
                    _ => Some(j),
                };
            }
        }
        let next = best?;
        inside[next] = true;
        qubits.push(next);
    }
    qubits.sort_unstable();
    Some(qubits)
}

/// Every partition grown from a starting point, scored. If no starting point
/// yields one, every available qubit is tried instead.
pub fn candidate_partitions(circuit: &Circuit, remaining: &RemainingGraph, hw: &HardwareModel) -> Vec<Partition> {
    let width = circuit.num_qubits();
    if width == 0 || width > remaining.count() {
        return Vec::new();
    }
    let grow_all = |starts: &[usize]| -> Vec<Partition> {
        starts
            .iter()
            .filter_map(|&s| {
                grow_partition(s, width, remaining, hw).map(|qubits| Partition {
                    score: fidelity_score(&qubits, circuit, hw),
                    qubits,
                    starting_point: s,
                })
            })
            .collect()
    };
    let found = grow_all(&starting_points(remaining, circuit, hw));
    if !found.is_empty() {
        return found;
    }
    let all: Vec<usize> = (0..hw.num_qubits()).filter(|&q| remaining.is_available(q)).collect();
    grow_all(&all)
}

/// Highest-scoring candidate; ties go to the lexicographically smallest
/// qubit set, then the lowest starting point.
pub fn best_partition(circuit: &Circuit, remaining: &RemainingGraph, hw: &HardwareModel) -> Option<Partition> {
    candidate_partitions(circuit, remaining, hw)
        .into_iter()
        .filter(|p| p.score > f64::NEG_INFINITY)
        .reduce(|best, p| {
            let better = p.score > best.score
                || (p.score == best.score && (&p.qubits, p.starting_point) < (&best.qubits, best.starting_point));
            if better {
                p
            } else {
                best
            }
        })
}
