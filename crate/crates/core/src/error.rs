use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("{what} needs {needed}, over the bound {bound}")]
    BoundExceeded {
        what: &'static str,
        needed: u64,
        bound: u64,
    },
    #[error("gcd(v0, w0) = {0} > 1: the twist map is not well defined")]
    GcdObstruction(u64),
    #[error("twist map undefined where x0 = y0 = 0")]
    Undefined,
    #[error("character of order {order} needs {order} | q - 1 (q = {q})")]
    NoCharacter { order: u64, q: u64 },
    #[error("weighted degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("p-adic precision too low to round coefficient {index}")]
    RoundingAmbiguity { index: usize },
    #[error("validation failed: {0}")]
    ValidationFailure(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
