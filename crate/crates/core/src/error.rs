//! Error type shared by every module.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A probability vector does not sum to one within the accepted
    /// tolerance. The message is stable; callers match on it.
    #[error("pmf sum out of tolerance (sum = {sum}, tolerance = {tolerance})")]
    SumOutOfTolerance { sum: f64, tolerance: f64 },

    #[error("channel row {row} sum out of tolerance (sum = {sum})")]
    RowSumOutOfTolerance { row: usize, sum: f64 },

    #[error("negative probability {value} at index {index}")]
    NegativeProbability { index: usize, value: f64 },

    #[error("empty alphabet")]
    EmptyAlphabet,

    #[error("duplicate label {label:?}")]
    DuplicateLabel { label: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("unknown symbol {symbol:?}")]
    UnknownSymbol { symbol: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate support: {0}")]
    DegenerateSupport(String),

    /// Exhaustive database enumeration is capped; larger domains must be
    /// handled by the closed-form paths.
    #[error("database domain too large: {size} databases exceeds the exact-enumeration limit {limit}")]
    DomainTooLarge { size: u128, limit: u64 },

    #[error("conditioning event has zero probability: {0}")]
    ZeroProbabilityConditioning(String),

    #[error("empty prior set")]
    EmptyPriorSet,
}
