use thiserror::Error;

/// Errors raised by the computation modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("singular matrix (det = 0)")]
    Singular,

    #[error("input error: {0}")]
    Input(String),

    /// One of the rank hypotheses on the exponent matrix fails.
    #[error("{0}")]
    Hypothesis(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("expansion spec error: {0}")]
    Spec(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
