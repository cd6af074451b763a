use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("total class must have degree-0 part equal to 1")]
    NotUnitTotal,

    #[error("monomial {0} is not in the image of Sq^1")]
    NotInSq1Image(String),

    #[error("integral class not defined: {0}")]
    IntegralUndefined(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("virtual bundle has negative rank {0}")]
    NegativeRank(i64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("point is not on the singular set: {0}")]
    OffSingularSet(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
