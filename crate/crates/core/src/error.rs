use thiserror::Error;

/// Errors shared by every layer of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An enclosure is too wide to decide the requested quantity (usually a floor).
    #[error("insufficient precision at {bits} bits")]
    InsufficientPrecision { bits: u32 },

    /// Escalation reached its ceiling without deciding the quantity.
    #[error("precision exhausted at {bits} bits{}", fmt_index(*.index))]
    PrecisionExhausted { bits: u32, index: Option<usize> },

    #[error("domain error: {0}")]
    Domain(String),

    /// A point could not be certified inside the region an operation requires.
    #[error("region violation: {0}")]
    RegionViolation(String),

    /// Two independent computations of the same quantity disagree.
    #[error("cross-check failure at index {index}: {detail}")]
    CrossCheckFailure { index: usize, detail: String },

    #[error("invalid surd: {0}")]
    InvalidSurd(String),

    #[error("parse error: {0}")]
    Parse(String),
}

fn fmt_index(index: Option<usize>) -> String {
    match index {
        Some(i) => format!(" (reached index {i})"),
        None => String::new(),
    }
}

impl Error {
    /// True for the two precision-related variants.
    pub fn is_precision(&self) -> bool {
        matches!(
            self,
            Error::InsufficientPrecision { .. } | Error::PrecisionExhausted { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
