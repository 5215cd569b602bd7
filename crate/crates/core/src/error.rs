use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("exact factorization incomplete: irreducible factor of degree {degree} remains ({remainder})")]
    ExactFactorizationIncomplete { degree: usize, remainder: String },

    #[error("root finder did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("invalid tolerance policy: {0}")]
    InvalidTolerance(String),

    #[error("precondition failed: {which}{}", witness.as_deref().map(|w| format!(" (witness: {w})")).unwrap_or_default())]
    PreconditionFailed {
        which: String,
        witness: Option<String>,
    },

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub fn precondition(which: impl Into<String>, witness: Option<String>) -> Self {
        Self::PreconditionFailed {
            which: which.into(),
            witness,
        }
    }
}
