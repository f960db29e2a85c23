use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A field violates its domain (negative weight, non-positive dof, NaN, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The weighted variances vanish or the estimate is not positive.
    #[error("degenerate components: {0}")]
    DegenerateComponents(String),

    #[error("all weights are zero")]
    AllZeroWeights,

    #[error("length mismatch: {values} values but {weights} weights")]
    LengthMismatch { values: usize, weights: usize },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::DegenerateComponents(msg.into())
    }
}
