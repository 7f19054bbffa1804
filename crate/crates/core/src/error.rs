use thiserror::Error;

/// Errors raised while building or analysing operators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of the object it was applied to.
    #[error("domain error: {0}")]
    Domain(String),

    /// A constructor received parameters that violate its preconditions.
    #[error("config error: {0}")]
    Config(String),

    /// An iterative numerical method did not converge.
    #[error("numerical error: {message}")]
    Numerical {
        message: String,
        /// Eigenvalues that had converged before the failure, if any.
        partial: Vec<(f64, f64)>,
    },

    /// No kernel witness construction exists for the given functionals.
    #[error("kernel witness not constructible: {0}")]
    NotConstructible(String),

    #[error("unsupported size: {0}")]
    UnsupportedSize(String),

    /// Functional application failed while assembling a matrix entry.
    #[error("entry ({row}, {col}): {source}")]
    Entry {
        row: usize,
        col: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
