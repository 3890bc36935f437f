use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A scalar that should be classified as zero or nonzero fell inside the
    /// guard band `(zero_tol, ambiguity_factor * zero_tol)`.
    #[error("ambiguous zero test in {context}: |{value:e}| lies between {zero_tol:e} and {upper:e}")]
    Ambiguity {
        context: String,
        value: f64,
        zero_tol: f64,
        upper: f64,
    },

    #[error("not a projector: {0}")]
    NotProjector(String),

    #[error("not Hermitian: {0}")]
    NotHermitian(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("{what} exceeds budget: {actual} > {limit}")]
    Budget {
        what: String,
        limit: usize,
        actual: usize,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A constructed object contradicts a theorem that should hold for it.
    /// Either the toolkit has a bug or a tolerance decision went wrong.
    #[error("integrity violation: {0}")]
    Integrity(String),

    #[error("solver did not converge after {iterations} iterations (bounds [{lower}, {upper}])")]
    Convergence {
        iterations: usize,
        lower: f64,
        upper: f64,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn budget(what: impl Into<String>, limit: usize, actual: usize) -> Self {
        Error::Budget {
            what: what.into(),
            limit,
            actual,
        }
    }
}
