use thiserror::Error;

/// Errors produced by the numerical kernels and constructors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative solver exhausted its iteration budget.
    #[error("{routine} did not converge after {iterations} iterations")]
    Convergence {
        routine: &'static str,
        iterations: usize,
    },

    /// Adaptive quadrature hit its subdivision limit on `[lower, upper]`.
    #[error("quadrature did not converge on [{lower}, {upper}] (error estimate {estimate:e})")]
    Quadrature { lower: f64, upper: f64, estimate: f64 },

    /// The problem exceeds the size budget of an exact solver or oracle.
    #[error("size error: {0}")]
    Size(String),

    /// A discrete measure violates its invariants.
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures of an iterative numerical method, as opposed to
    /// invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Convergence { .. } | Error::Quadrature { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
