use thiserror::Error;

use crate::statevec::QubitLabel;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("duplicate qubit label {0}")]
    DuplicateLabel(QubitLabel),

    #[error("qubit label {0} is not in the register")]
    UnknownLabel(QubitLabel),

    #[error("label lists differ: {left:?} vs {right:?}")]
    LabelMismatch {
        left: Vec<QubitLabel>,
        right: Vec<QubitLabel>,
    },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("register of {0} qubits is outside the supported range 1..=8")]
    RegisterSize(usize),

    #[error("basis bit must be 0 or 1, got {0}")]
    InvalidBit(u8),

    #[error("amplitude is not finite")]
    NonFinite,

    #[error("state is not normalized: squared norm {0}")]
    NotNormalized(f64),

    #[error("cannot normalize a vector of norm {0}")]
    ZeroNorm(f64),

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("two-qubit operation needs distinct qubits, got {0} twice")]
    SameQubit(QubitLabel),

    #[error("measurement branch has probability {0:e}; no post-measurement state exists")]
    ImpossibleBranch(f64),

    #[error("input state needs {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },

    #[error("no Pauli correction restores the branch ({0})")]
    NoCorrection(String),

    #[error("empty probe set")]
    NoProbes,

    #[error("invalid configuration: {0}")]
    Config(String),
}
