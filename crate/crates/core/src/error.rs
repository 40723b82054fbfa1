use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two objects that must act on the same register do not.
    SizeMismatch { expected: usize, found: usize },
    /// A dense routine was asked for more qubits than [`crate::DENSE_QUBIT_CAP`].
    Capacity { n_qubits: usize, cap: usize },
    /// Qubit count outside `1..=64`.
    InvalidQubitCount(usize),
    /// Malformed Pauli text.
    Parse(String),
    EmptyGenerators,
    /// Partition or block count outside its allowed range.
    OutOfRange { what: &'static str, value: usize, min: usize, max: usize },
    InvalidPartition(String),
    /// The closure stopped at `max_iterations` before converging.
    TruncatedClosure { iterations: usize, rank: usize },
    /// Wrong number of ansatz parameters.
    ParameterCount { expected: usize, found: usize },
    /// A NaN or infinite value showed up in an energy evaluation.
    NonFinite { context: &'static str, value: f64 },
    DegenerateFit { m: usize, reason: String },
    Overflow(&'static str),
    Numerical(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SizeMismatch { expected, found } => {
                write!(f, "qubit count mismatch: expected {expected}, found {found}")
            }
            Error::Capacity { n_qubits, cap } => {
                write!(f, "{n_qubits} qubits exceeds the dense-matrix cap of {cap}")
            }
            Error::InvalidQubitCount(n) => write!(f, "invalid qubit count {n} (must be 1..=64)"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::EmptyGenerators => write!(f, "generator list is empty"),
            Error::OutOfRange { what, value, min, max } => {
                write!(f, "{what} = {value} outside {min}..={max}")
            }
            Error::InvalidPartition(msg) => write!(f, "invalid partition: {msg}"),
            Error::TruncatedClosure { iterations, rank } => write!(
                f,
                "closure truncated after {iterations} iterations at rank {rank}; result is inconclusive"
            ),
            Error::ParameterCount { expected, found } => {
                write!(f, "expected {expected} parameters, found {found}")
            }
            Error::NonFinite { context, value } => write!(f, "non-finite value {value} in {context}"),
            Error::DegenerateFit { m, reason } => write!(f, "degenerate proxy fit for m = {m}: {reason}"),
            Error::Overflow(what) => write!(f, "integer overflow computing {what}"),
            Error::Numerical(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
