use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("generator matrix is singular")]
    SingularMatrix,

    #[error("value {requested} lies beyond the generated distance-set limit {limit}")]
    LimitExceeded { requested: u64, limit: u64 },

    #[error("dimension {dim} is not supported here ({supported})")]
    DimensionUnsupported { dim: usize, supported: &'static str },

    #[error("family hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
