use thiserror::Error;

/// Errors raised by the equilibrium-measure routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation at a real charge location where the field derivative has a pole.
    #[error("pole of the field derivative at x = {x}")]
    Pole { x: f64 },

    /// A bracketed root search was given an interval without a sign change.
    #[error("bracket [{lo}, {hi}] does not straddle a sign change")]
    Bracket { lo: f64, hi: f64 },

    /// An iterative method stopped before reaching its tolerance.
    #[error("{method} did not converge: residual {residual:e} after {iterations} iterations")]
    NonConvergence {
        method: &'static str,
        residual: f64,
        iterations: usize,
    },

    /// A degenerate configuration (collapsed support, coincident points).
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
