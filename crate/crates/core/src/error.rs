//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("time {t} outside worldline domain [{lo}, {hi}]")]
    OutOfDomain { t: f64, lo: f64, hi: f64 },

    #[error("retarded-time root lies outside the worldline domain (needed t' <= {needed}, domain starts at {domain_start}); extend the static history")]
    RootOutsideDomain { needed: f64, domain_start: f64 },

    #[error("root solver did not converge within {iterations} iterations (last residual {residual})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("quadrature tolerance {tol} not reached within subdivision cap (error estimate {achieved})")]
    ToleranceNotReached { tol: f64, achieved: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
