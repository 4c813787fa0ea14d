use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of {function} at {at}")]
    Pole { function: &'static str, at: String },

    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("quadrature did not reach tolerance: estimate {value} ± {error_estimate}")]
    Quadrature { value: String, error_estimate: f64 },

    #[error("argument out of range: {0}")]
    Range(String),

    #[error("no sign change of Ξ on [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("zeros table: {0}")]
    ZerosTable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
