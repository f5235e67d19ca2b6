use thiserror::Error;

use crate::ring::Ring;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} outside the supported range [2, {1}]")]
    ModulusOutOfRange(u64, u64),

    /// Moduli of the two rings.
    #[error("ring mismatch: Z/{0} vs Z/{1}")]
    RingMismatch(u64, u64),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("morphism is not well defined: {0}")]
    NotWellDefined(String),

    #[error("not a chain complex: {0}")]
    NotAComplex(String),

    #[error("diagram does not commute: {0}")]
    NonCommuting(String),

    #[error("{0} elements exceed the enumeration cap {1}")]
    TooLarge(u128, u128),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn ring_mismatch(a: Ring, b: Ring) -> Error {
        Error::RingMismatch(a.modulus(), b.modulus())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(format!("line {} column {}: {}", e.line(), e.column(), e))
    }
}
