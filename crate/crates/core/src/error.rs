use thiserror::Error;

/// Errors raised by the physics, metric, and optimizer layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum IsacError {
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("singular combiner matrix for user {user}")]
    Singular { user: usize },

    #[error("zero decoder vector")]
    ZeroDecoder,

    #[error("index {index} out of range for {len} users")]
    UserIndex { index: usize, len: usize },

    #[error("empty population")]
    EmptyPopulation,

    #[error("invalid evolver configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, IsacError>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> IsacError {
    IsacError::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
