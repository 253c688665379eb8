use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("energy {energy} is not an eigenvalue for hbar={hbar} (level index {index}); nearest admissible hbar is {nearest_hbar}")]
    NotAnEigenvalue {
        energy: f64,
        hbar: f64,
        index: f64,
        nearest_hbar: f64,
    },

    #[error("singular evaluation point: {0}")]
    Singular(String),

    #[error("smoothed sum did not truncate within {max_terms} terms")]
    Divergence { max_terms: usize },

    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),

    #[error("contour shift amplifies the integrand by e^{exponent:.3}, beyond the guard")]
    Amplification { exponent: f64 },

    #[error("fit is undefined: {0}")]
    UndefinedFit(String),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
