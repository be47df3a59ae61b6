use thiserror::Error;

/// Errors raised by the optimization and analysis routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("size error: {0}")]
    Size(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("invalid state: {0}")]
    State(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("instance too large: {0}")]
    Capacity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
