//! Gate dependency DAG.

use std::collections::VecDeque;

use crate::circuit::Circuit;

/// Dependency graph over a circuit's gate indices.
///
/// Gate `u` has an arc to `v` iff `v` is the next gate after `u` on some
/// shared qubit. Barriers participate like any other gate on their listed
/// qubits, which orders everything across them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CircuitDag {
    preds: Vec<Vec<usize>>,
    succs: Vec<Vec<usize>>,
}

impl CircuitDag {
    pub fn build(circuit: &Circuit) -> Self {
        let len = circuit.len();
        let mut preds = vec![Vec::new(); len];
        let mut succs = vec![Vec::new(); len];
        let mut last: Vec<Option<usize>> = vec![None; circuit.num_qubits()];
        for (v, gate) in circuit.gates().iter().enumerate() {
            for &q in &gate.qubits {
                if let Some(u) = last[q] {
                    if !succs[u].contains(&v) {
                        succs[u].push(v);
                        preds[v].push(u);
                    }
                }
                last[q] = Some(v);
            }
        }
        CircuitDag { preds, succs }
    }

    pub fn len(&self) -> usize {
        self.preds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.preds.is_empty()
    }

    pub fn predecessors(&self, gate: usize) -> &[usize] {
        &self.preds[gate]
    }

    pub fn successors(&self, gate: usize) -> &[usize] {
        &self.succs[gate]
    }

    pub fn edge_count(&self) -> usize {
        self.succs.iter().map(Vec::len).sum()
    }

    /// Kahn's algorithm; `None` if a cycle exists.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut in_degree: Vec<usize> = self.preds.iter().map(Vec::len).collect();
        let mut queue: VecDeque<usize> = (0..self.len()).filter(|&i| in_degree[i] == 0).collect();
        let mut order = Vec::with_capacity(self.len());
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in &self.succs[u] {
                in_degree[v] -= 1;
                if in_degree[v] == 0 {
                    queue.push_back(v);
                }
            }
        }
        (order.len() == self.len()).then_some(order)
    }

    /// All transitive predecessors of `gate`, sorted.
    pub fn ancestors(&self, gate: usize) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut stack = self.preds[gate].clone();
        while let Some(u) = stack.pop() {
            if !seen[u] {
                seen[u] = true;
                stack.extend_from_slice(&self.preds[u]);
            }
        }
        (0..self.len()).filter(|&i| seen[i]).collect()
    }
}
