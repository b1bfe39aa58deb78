use thiserror::Error;

/// Every fallible operation in the crate reports through this type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("gate acts twice on qubit {0}")]
    RepeatedQubit(usize),
    #[error("qubit count {0} not supported (need 1..={1})")]
    UnsupportedSize(usize, usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("circuit contains a Hadamard gate")]
    HadamardPresent,
    #[error("phase polynomial term {mask:#b} has weight above 2")]
    WeightTooHigh { mask: u64 },
    #[error("stage template mismatch: {0}")]
    Template(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
