use thiserror::Error;

use crate::circuit::JobId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unsupported gate `{name}` at line {line}")]
    UnsupportedGate { name: String, line: usize },
    #[error("gate {kind} expects {expected} qubit(s), got {got}")]
    Arity {
        kind: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("qubit index {qubit} out of range for a {n}-qubit circuit")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("gate {kind} repeats qubit {qubit}")]
    DuplicateQubit { kind: &'static str, qubit: usize },
    #[error("invalid duration {value} ns for gate {kind}")]
    InvalidDuration { kind: &'static str, value: f64 },
    #[error("invalid job: {0}")]
    InvalidJob(String),
    #[error("json: {0}")]
    Json(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HardwareError {
    #[error("unknown topology `{0}` (expected ring16, chain16 or grid66)")]
    UnknownTopology(String),
    #[error("invalid coupling graph: {0}")]
    InvalidGraph(String),
    #[error("invalid calibration: {0}")]
    InvalidCalibration(String),
    #[error("noise level must be positive and finite, got {0}")]
    InvalidNoiseLevel(f64),
    #[error("json: {0}")]
    Json(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FidelityError {
    #[error("qubit {qubit}: T2 = {t2} us violates T2 < 2*T1 (T1 = {t1} us)")]
    Decoherence { qubit: usize, t1: f64, t2: f64 },
    #[error("no two-qubit reliability for pair ({0}, {1})")]
    MissingEdge(usize, usize),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("circuit width {width} exceeds the oracle limit of {limit} qubits")]
    TooWide { width: usize, limit: usize },
    #[error("width mismatch: original has {original} qubits, routing maps {routed}")]
    WidthMismatch { original: usize, routed: usize },
    #[error("partition of {size} qubits is too large for exhaustive search (limit {limit})")]
    PartitionTooLarge { size: usize, limit: usize },
    #[error(transparent)]
    Fidelity(#[from] FidelityError),
    #[error(transparent)]
    Mapper(#[from] MapperError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("invalid scheduler config: {0}")]
    Invalid(String),
    #[error("config parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("job {id} (width {width}) can never be scheduled on this device: {reason}")]
    Unschedulable {
        id: JobId,
        width: usize,
        reason: String,
    },
    #[error("invalid workload: {0}")]
    InvalidWorkload(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Fidelity(#[from] FidelityError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Mapper(#[from] MapperError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MapperError {
    #[error("invalid mapping: {0}")]
    InvalidMapping(String),
    #[error("partition {0:?} is not connected")]
    DisconnectedPartition(Vec<usize>),
    #[error(transparent)]
    Fidelity(#[from] FidelityError),
}
