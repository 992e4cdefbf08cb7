use thiserror::Error;

/// Errors raised by the simulator and the accounting layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension {requested} exceeds the per-side limit of {limit}")]
    DimensionLimit { requested: usize, limit: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (max deviation of U^dagger U from I is {0:e})")]
    NotUnitary(f64),

    #[error("eigensolver did not converge")]
    NoConvergence,

    #[error("unknown qubit label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate qubit label `{0}`")]
    DuplicateLabel(String),

    #[error("empty qubit selection")]
    EmptySelection,

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("qubit `{label}` is not owned by {party}")]
    NotOwned { label: String, party: String },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("incomplete transcript: {0}")]
    IncompleteTranscript(String),
}

pub type Result<T> = std::result::Result<T, Error>;
