//! Dense state-vector simulation of teleporting a two-qubit state through a
//! four-qubit cluster channel.
//!
//! [`statevec`], [`gates`] and [`measurement`] form a small labeled-register
//! simulator; [`protocol`] runs both teleportation schemes and checks their
//! correction tables by brute force; [`harness`] turns runs into reports.

pub mod error;
pub mod gates;
pub mod harness;
pub mod measurement;
pub mod protocol;
pub mod statevec;

pub use error::{Error, Result};
pub use gates::{apply_cz, apply_pauli, apply_single, pauli_matrix, Pauli, SingleQubitUnitary};
pub use harness::{emit_report, run, Mode, OutputFormat, Report, RunConfig};
pub use measurement::{
    bell_vector, project_bell, sample_bell, trial_rng, BellBranches, BellOutcome, ProjectionResult,
};
pub use protocol::{
    assemble_total, cluster_state, derive_corrections, make_input, run_branch, table_lookup,
    verify_tables, CorrectionOp, InputState, Scheme, TableReport, TrialResult, Verdict,
};
pub use statevec::{qubits, Amplitude, QubitLabel, StateVector};
