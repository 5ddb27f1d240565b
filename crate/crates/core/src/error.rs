use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Inputs do not fit together (mismatched groups, wrong lengths, out-of-range vertices).
    #[error("structural error: {0}")]
    Structural(String),

    /// An operation was called outside the parameter range it is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// A randomized procedure did not reach its target within the retry budget.
    #[error("{operation}: statistical failure after {attempts} attempts ({detail})")]
    StatisticalFailure {
        operation: &'static str,
        attempts: usize,
        detail: String,
    },

    /// An exhaustive computation would exceed its enumeration budget.
    #[error("refusing to enumerate {required} cases (budget {budget}): {what}")]
    BudgetExceeded {
        what: String,
        required: u128,
        budget: u128,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn structural<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Structural(msg.into()))
}
