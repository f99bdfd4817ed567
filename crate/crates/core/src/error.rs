use thiserror::Error;

use crate::scalars::FieldDescriptor;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed scalar {text:?}: {reason}")]
    MalformedScalar { text: String, reason: &'static str },

    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),

    #[error("{0} is not a prime modulus")]
    NotPrime(u64),

    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldDescriptor, FieldDescriptor),

    #[error("inversion of zero")]
    DivisionByZero,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("eigenvalues at positions {0} and {1} coincide")]
    RepeatedEigenvalue(usize, usize),

    #[error("index {index} out of range 0..={max}")]
    OutOfRange { index: usize, max: usize },

    #[error("not diagonalizable over the supplied eigenvalues: {0}")]
    NotDiagonalizable(String),

    #[error("rank mismatch between E_{index} ({rank}) and E*_{index} ({rank_star})")]
    RankMismatch { index: usize, rank: usize, rank_star: usize },

    #[error("system is not sharp (rho_0 = {0})")]
    NotSharp(usize),

    #[error("identity {id} failed: {detail}")]
    IdentityFailed { id: String, detail: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("document error: {0}")]
    Document(String),
}

impl Error {
    pub(crate) fn identity(id: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::IdentityFailed { id: id.into(), detail: detail.into() }
    }
}
