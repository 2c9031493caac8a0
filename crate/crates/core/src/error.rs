use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unsupported edge weight type `{0}` (only EUC_2D is supported)")]
    UnsupportedMetric(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("order is not a permutation of 0..{n}")]
    NotAPermutation { n: usize },

    #[error("illegal state: {0}")]
    IllegalState(String),

    #[error("stale move for cycle {cycle} (last applied cycle {last})")]
    StaleMove { cycle: u64, last: u64 },

    #[error("instance too large for the exact solver: n = {n} (max {max})")]
    TooLarge { n: usize, max: usize },

    #[error("worker failure: {0}")]
    WorkerFailed(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
