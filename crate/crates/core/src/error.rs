use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("arithmetic error: {0}")]
    Arithmetic(String),
    #[error("undefined valuation")]
    UndefinedValuation,
    #[error("not in valuation ring")]
    NotInValuationRing,
    #[error("group not finite or bound too small (bound {0})")]
    EnumerationBound(usize),
    #[error("braid violation: {0}")]
    BraidViolation(String),
    #[error("representation not defined over expected ring: {0}")]
    NotOverRing(String),
    #[error("representation not balanced: {0}")]
    NotBalanced(String),
    #[error("form degenerate")]
    Degenerate,
    #[error("missing irreducibles: dimension count {have} of {need}")]
    MissingIrreducibles { have: usize, need: usize },
    #[error("integrality violation: {0}")]
    Integrality(String),
    #[error("positive-definiteness failure: {0}")]
    NotPositiveDefinite(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
