use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// The formula divides by `1 - rho^2`; callers must use the instantaneous form.
    #[error("degenerate correlation |rho| = 1; use the instantaneous-feedback form")]
    DegenerateCorrelation,

    /// Adaptive quadrature ran out of subdivisions.
    #[error("quadrature did not converge: estimate {estimate:e}, error bound {error_bound:e}")]
    Convergence { estimate: f64, error_bound: f64 },

    /// A result under- or overflowed the representable range.
    #[error("range error: {0}")]
    Range(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
