use thiserror::Error;

use crate::oracle::csv::CsvError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("size mismatch: {left} items vs {right} items")]
    SizeMismatch { left: usize, right: usize },

    #[error("not a permutation of 0..{n}: {reason}")]
    NotPermutation { n: usize, reason: String },

    #[error("{solver} supports at most {limit} items, got {n}")]
    TooLarge {
        solver: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("invalid pair ({i}, {j}) for {n} items")]
    InvalidPair { i: usize, j: usize, n: usize },

    #[error("gamma must lie in (0, 0.5], got {0}")]
    InvalidGamma(f64),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error(transparent)]
    Csv(#[from] CsvError),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors raised by solver size guards (as opposed to bad input).
    pub fn is_solver_guard(&self) -> bool {
        matches!(self, Error::TooLarge { .. })
    }
}
