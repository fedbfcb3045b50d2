use thiserror::Error;

/// Errors raised by the analytic and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A model or spec violates its parameter invariants.
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// Adaptive quadrature exhausted its budget before meeting the tolerance.
    #[error("quadrature did not converge (best estimate {estimate:e}, error estimate {err_est:e})")]
    NonConvergence { estimate: f64, err_est: f64 },

    /// A non-finite value appeared inside a numerical routine.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The conditioning event has probability zero.
    #[error("degenerate conditioning: {0}")]
    DegenerateConditioning(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(domain(format!("{name} = {p} is not in [0, 1]")))
    }
}
