use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("negative radicand: cannot take the square root of {0}")]
    NegativeRadicand(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("point set `{0}` is empty")]
    EmptyPointSet(String),

    #[error("unsupported norm {norm} for {operation}; use decide_at_translation for witness checks")]
    UnsupportedNorm { norm: String, operation: &'static str },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("solver deadline exceeded")]
    Timeout,

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
