//! Noise-aware scheduling of quantum jobs on a shared device, with a
//! discrete-event simulator for comparing scheduling policies.

pub mod circuit;
pub mod dag;
pub mod error;
pub mod fidelity;
pub mod formats;
pub mod hardware;
pub mod mapper;
pub mod oracle;
pub mod partition;
pub mod scheduler;
pub mod sim;

pub use circuit::{circuit_time, Circuit, GateDurations, GateKind, GateOp, Job, JobId};
pub use error::{CircuitError, ConfigError, FidelityError, HardwareError, MapperError, OracleError, SimError};
pub use hardware::{builtin_topology, HardwareModel, Topology};
pub use scheduler::SchedulerConfig;
pub use sim::{generate_workload, simulate, Policy, RunReport, TimeModel, Workload, WorkloadParams};
