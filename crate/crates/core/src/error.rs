use thiserror::Error;

/// Errors raised by the model and solver routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("count {m} exceeds number of trials {n}")]
    CountExceedsTrials { n: u64, m: u64 },

    #[error("probability must lie in [0, 1], got {0}")]
    InvalidProbability(f64),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid bracket: {0}")]
    InvalidBracket(String),

    #[error("function value is NaN at x = {x}")]
    NotFinite { x: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("population of {size} exceeds the enumeration limit of {limit}")]
    TooLarge { size: u32, limit: u32 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
