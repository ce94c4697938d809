//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A domain-type precondition was violated (non-half-integer spin,
    /// abundances not summing to one, non-positive temperature, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A matrix handed to the eigensolver was not Hermitian.
    #[error("matrix is not Hermitian (max asymmetry {asymmetry:.3e} vs scale {scale:.3e})")]
    NonHermitian { asymmetry: f64, scale: f64 },

    /// Operand dimensions do not agree.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A numerical routine failed to meet its accuracy contract.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// An iterative fit stopped without converging; diagnostics attached.
    #[error("fit did not converge: {0}")]
    NonConvergence(String),

    /// Unknown site name, with suggestions for valid ones.
    #[error("unknown site '{name}'; known sites: {known}")]
    UnknownSite { name: String, known: String },

    /// Malformed input data (CSV schema, parameter file, range syntax).
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
