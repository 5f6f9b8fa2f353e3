//! Reliability estimates for placed circuits.

use serde::{Deserialize, Serialize};

use crate::circuit::{circuit_time, expand_composites, Circuit, GateKind};
use crate::error::FidelityError;
use crate::hardware::HardwareModel;
use crate::mapper::Mapping;

/// EPST* with its factor breakdown.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub epst_star: f64,
    pub gate_1q: f64,
    pub gate_2q: f64,
    pub readout: f64,
    pub amplitude_damping: f64,
    pub phase_damping: f64,
    pub t_c_ns: f64,
}

/// Pure-dephasing time `T1 T2 / (2 T1 - T2)`, all in microseconds.
pub fn dephasing_time(qubit: usize, t1_us: f64, t2_us: f64) -> Result<f64, FidelityError> {
    let denom = 2.0 * t1_us - t2_us;
    if denom.is_nan() || denom <= 0.0 {
        return Err(FidelityError::Decoherence {
            qubit,
            t1: t1_us,
            t2: t2_us,
        });
    }
    Ok(t1_us * t2_us / denom)
}

/// Survival probabilities against amplitude and phase damping for a qubit
/// idling `t_c_ns`.
pub fn decoherence_factors(qubit: usize, t_c_ns: f64, t1_us: f64, t2_us: f64) -> Result<(f64, f64), FidelityError> {
    let t_phi = dephasing_time(qubit, t1_us, t2_us)?;
    let t_us = t_c_ns / 1000.0;
    Ok(((-t_us / t1_us).exp(), (-t_us / t_phi).exp()))
}

/// EPST* of a routed circuit, timing it against the device durations.
pub fn epst_star(routed: &Circuit, mapping: &Mapping, hw: &HardwareModel) -> Result<FidelityReport, FidelityError> {
    let t_c = circuit_time(routed, &hw.cal.durations)?;
    epst_star_at(routed, mapping, hw, t_c)
}

/// EPST* with an explicit circuit time, e.g. a round makespan when circuits
/// are aligned to measure together.
///
/// Gate and readout reliabilities are taken per physical location; the
/// decoherence products run over the qubits the mapping occupies. A circuit
/// without explicit measurements reads out every occupied qubit.
pub fn epst_star_at(routed: &Circuit, mapping: &Mapping, hw: &HardwareModel, t_c_ns: f64) -> Result<FidelityReport, FidelityError> {
    let mut gate_1q = 1.0;
    let mut gate_2q = 1.0;
    let mut readout = 1.0;
    let mut measured = false;
    for g in expand_composites(routed).gates() {
        match g.kind {
            k if k.is_single_qubit_gate() => gate_1q *= hw.cal.r_1q[g.qubits[0]],
            k if k.is_two_qubit_gate() => {
                let (a, b) = (g.qubits[0], g.qubits[1]);
                gate_2q *= hw.cal.two_qubit(a, b).ok_or(FidelityError::MissingEdge(a, b))?;
            }
            GateKind::Measure => {
                measured = true;
                readout *= hw.cal.r_ro[g.qubits[0]];
            }
            _ => {}
        }
    }
    if !measured {
        readout = mapping.physical_qubits().iter().map(|&p| hw.cal.r_ro[p]).product();
    }
    let mut amplitude_damping = 1.0;
    let mut phase_damping = 1.0;
    for &p in mapping.physical_qubits() {
        let (ra, rp) = decoherence_factors(p, t_c_ns, hw.cal.t1_us[p], hw.cal.t2_us[p])?;
        amplitude_damping *= ra;
        phase_damping *= rp;
    }
    Ok(FidelityReport {
        epst_star: gate_1q * gate_2q * readout * amplitude_damping * phase_damping,
        gate_1q,
        gate_2q,
        readout,
        amplitude_damping,
        phase_damping,
        t_c_ns,
    })
}

/// Average-reliability EPST: device means raised to the operation counts,
/// no decoherence terms.
pub fn epst_plain(routed: &Circuit, mapping: &Mapping, hw: &HardwareModel) -> f64 {
    let (r1, r2, ro) = hw.mean_reliabilities();
    let n_ro = if routed.has_measurements() {
        routed.count_readout()
    } else {
        mapping.physical_qubits().len()
    };
    r1.powi(routed.count_single_qubit() as i32) * r2.powi(routed.count_two_qubit() as i32) * ro.powi(n_ro as i32)
}

/// Partition score `-N_2q (1 - mean r_2q) - N_ro (1 - mean r_ro)`, means taken
/// over the partition's internal edges and its qubits.
///
/// A partition with no internal edge cannot host two-qubit gates and scores
/// negative infinity when the circuit has any.
pub fn fidelity_score(partition: &[usize], circuit: &Circuit, hw: &HardwareModel) -> f64 {
    let n_2q = circuit.count_two_qubit() as f64;
    let n_ro = circuit.count_readout() as f64;
    let mut edge_sum = 0.0;
    let mut edges = 0usize;
    for (i, &a) in partition.iter().enumerate() {
        for &b in &partition[i + 1..] {
            if let Some(r) = hw.graph.has_edge(a, b).then(|| hw.cal.two_qubit(a, b)).flatten() {
                edge_sum += r;
                edges += 1;
            }
        }
    }
    let two_qubit_term = if n_2q == 0.0 {
        0.0
    } else if edges == 0 {
        return f64::NEG_INFINITY;
    } else {
        n_2q * (1.0 - edge_sum / edges as f64)
    };
    let readout_term = if partition.is_empty() || n_ro == 0.0 {
        0.0
    } else {
        let mean_ro = partition.iter().map(|&q| hw.cal.r_ro[q]).sum::<f64>() / partition.len() as f64;
        n_ro * (1.0 - mean_ro)
    };
    -two_qubit_term - readout_term
}

/// `2 * sum(r_2q to available neighbours) + r_ro`.
pub fn fidelity_degree(q: usize, available: &[bool], hw: &HardwareModel) -> f64 {
    let neighbours: f64 = hw
        .graph
        .neighbors(q)
        .iter()
        .filter(|&&j| available[j])
        .map(|&j| hw.cal.two_qubit(q, j).unwrap_or(0.0))
        .sum();
    2.0 * neighbours + hw.cal.r_ro[q]
}
