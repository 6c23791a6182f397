use thiserror::Error;

/// Errors raised by the capacity library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("channel is not completely positive (minimum Choi eigenvalue {min_eigenvalue:.3e})")]
    NotCompletelyPositive { min_eigenvalue: f64 },

    #[error("output points are affinely dependent (rank {rank} < {needed}); dependent entries {dependent:?}")]
    RankDeficient {
        rank: usize,
        needed: usize,
        dependent: Vec<usize>,
    },

    #[error("reference state is rank deficient: {0}")]
    SupportMismatch(String),

    #[error("empty support after pruning with threshold {threshold:e}")]
    EmptySupport { threshold: f64 },

    #[error("{stage} did not converge after {iterations} iterations (best value {best_value}, residual {residual:.3e})")]
    NoConvergence {
        stage: &'static str,
        iterations: usize,
        best_value: f64,
        residual: f64,
        best_iterate: Vec<f64>,
    },

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
