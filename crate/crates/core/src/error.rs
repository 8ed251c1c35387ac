use thiserror::Error;

use crate::linalg::Ring;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(Ring, Ring),
    #[error("{op} requires a field, got {ring}")]
    NotAField { op: &'static str, ring: Ring },
    #[error("{op} requires the integers, got {ring}")]
    NotIntegers { op: &'static str, ring: Ring },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid chain complex: {0}")]
    InvalidComplex(String),
    #[error("invalid chain map: {0}")]
    InvalidMap(String),
    #[error("invalid cubical diagram: {0}")]
    InvalidCube(String),
    #[error("invalid object of the factorization category: {0}")]
    InvalidObject(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
