use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("variable labels differ: {0:?} vs {1:?}")]
    Labels(Vec<String>, Vec<String>),
    #[error("substitution requires a series without constant term")]
    Substitution,
    #[error("inversion: {0}")]
    Inversion(String),
    #[error("order: {0}")]
    Order(String),
    #[error("domain: {0}")]
    Domain(String),
    #[error("divergent integral: {0}")]
    Divergence(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("contour geometry: {0}")]
    Geometry(String),
    #[error("root finding: {0}")]
    Root(String),
    #[error("integration: {0}")]
    Integration(String),
    #[error("fit quality: {0}")]
    Fit(String),
    #[error("continuation: {0}")]
    Continuation(String),
    #[error("out of range: {0}")]
    Range(String),
    #[error("refinement: {0}")]
    Refinement(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Verification-type failures map to exit code 1, everything else to 2.
    pub fn is_verification(&self) -> bool {
        matches!(
            self,
            Error::Verification(_) | Error::Fit(_) | Error::Continuation(_) | Error::Inversion(_) | Error::Refinement(_)
        )
    }
}
