use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("channel is not trace preserving (deviation {0:e})")]
    NotTracePreserving(f64),
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("not a Clifford: {0}")]
    NotClifford(String),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("op {index}: {detail}")]
    ForeignGate { index: usize, detail: String },
    #[error("twirled channel is not a stochastic mixture: {0}")]
    NotStochastic(String),
    #[error("strong XY twirl requires the noise model to declare identical noise on sign-variant gates")]
    MissingN3,
    #[error("noise model: {0}")]
    NoiseModel(String),
    #[error("circuit: {0}")]
    Circuit(String),
    #[error("{0}")]
    Parse(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
