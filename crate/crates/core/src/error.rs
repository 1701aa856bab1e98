use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed rational {0:?}: expected p/q with q > 0")]
    ParseRational(String),
    #[error("rank {0} outside 1..=13")]
    InvalidRank(i64),
    #[error("threshold {0} outside 0..=13")]
    InvalidThreshold(i64),
    #[error("malformed strategy {0:?}: expected threshold:t or 13 characters of H/S")]
    ParseStrategy(String),
    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(String),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("conditioning event has probability zero: {0}")]
    ImpossibleCondition(String),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("pool never terminates: {0}")]
    Divergence(String),
    #[error("bound must be at least 1")]
    ZeroBound,
}
