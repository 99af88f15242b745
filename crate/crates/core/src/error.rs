use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid encoding: {0}")]
    InvalidEncoding(String),
    #[error("genotype length {got} does not match encoding length {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("move index {index} out of range for neighborhood of size {size}")]
    MoveOutOfRange { index: usize, size: usize },
    #[error("unsupported move for this state: {0}")]
    UnsupportedMove(String),
    #[error("expected {expected} coefficients, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("coefficient {index} = {value} outside [{lower}, {upper}]")]
    OutOfBounds {
        index: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },
    #[error("unknown objective `{0}`")]
    UnknownObjective(String),
    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("invalid hex genotype: {0}")]
    InvalidHex(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
