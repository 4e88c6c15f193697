use thiserror::Error;

use crate::strata::Ambient;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported denominator: {0}")]
    UnsupportedDenominator(String),

    #[error("exponent {exponent} outside series window [{lo}, {hi}]")]
    OutsideWindow { exponent: i64, lo: i64, hi: i64 },

    #[error("series operands are not closed above; product is undefined")]
    OpenSeriesProduct,

    #[error("unstable vertex: genus {genus} with {legs} legs")]
    Unstable { genus: u32, legs: usize },

    #[error("graph is not a tree: {0}")]
    NotATree(String),

    #[error("lambda_{index} exceeds vertex genus {genus}")]
    LambdaIndex { index: u32, genus: u32 },

    #[error("marking {0} appears more than once")]
    RepeatedMarking(u32),

    #[error("invalid stratum: {0}")]
    InvalidStratum(String),

    #[error("ambient mismatch: {0:?} vs {1:?}")]
    AmbientMismatch(Ambient, Ambient),

    #[error("genus mismatch: {0}")]
    GenusMismatch(String),

    #[error("marking {0} not present in the ambient space")]
    MissingLeg(u32),

    #[error("unsupported pushforward shape: {0}")]
    UnsupportedPushforward(String),

    #[error("unsupported decoration: {0}")]
    UnsupportedDecoration(String),

    #[error("decoration is not reducible: {0}")]
    NotReducible(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("step budget of {budget} exceeded")]
    BudgetExceeded { budget: u64, partial: Box<crate::expand::ExpansionReport> },

    #[error("cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
