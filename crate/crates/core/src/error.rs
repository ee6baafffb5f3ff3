use crate::text::Symbol;
use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A rule's output symbol already occurs in the text it is applied to.
    #[error("output symbol {0:?} already occurs in the text; merge outputs must be fresh")]
    FreshnessViolation(Symbol),

    /// A symbol id does not fit the alphabet it is used with.
    #[error("symbol id {id} out of range for alphabet of {alphabet_len} entries")]
    SymbolOutOfRange { id: u32, alphabet_len: usize },

    /// A rule references an alphabet entry that was created by a different merge.
    #[error("rule output {out:?} does not match the alphabet entry created for it")]
    RuleMismatch { out: Symbol },

    /// A partial step lists positions that are unsorted, overlapping, or do not
    /// host the step's pair.
    #[error("invalid partial step: {0}")]
    InvalidStep(String),

    /// An instance exceeds the configured search budget up front.
    #[error("instance exceeds search budget: {0}")]
    BudgetExceeded(String),

    /// An instance exceeds a brute-force oracle's hard size cap.
    #[error("instance exceeds brute-force size cap: {0}")]
    SizeCapExceeded(String),

    /// A graph is not simple and 3-regular.
    #[error("graph is not cubic: {0}")]
    NotCubic(String),

    /// A merge sequence does not have the shape required by the reduction.
    #[error("sequence is not well-formed for this reduction instance: {0}")]
    NotWellFormed(String),

    /// A generator or operation received an out-of-range parameter.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// A serialized model or instance file does not match the expected schema.
    #[error("bad model or instance format: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
