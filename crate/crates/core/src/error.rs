use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KhlError {
    #[error("polynomials live in different variable universes")]
    UniverseMismatch,
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("input is not multihomogeneous: {0}")]
    NotHomogeneous(String),
    #[error("deadline exceeded")]
    Deadline,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("no value: {0}")]
    NoValue(String),
    #[error("search failed: {0}")]
    SearchFailed(String),
    #[error("malformed plabic graph: {0}")]
    Plabic(String),
}

pub type Result<T> = std::result::Result<T, KhlError>;
