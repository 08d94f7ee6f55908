use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("quotient d_{index} = {value} is smaller than 2")]
    QuotientTooSmall { index: usize, value: u64 },

    #[error("explicit quotient list is empty")]
    EmptyExplicitList,

    #[error("declared bound {bound} is violated: {detail}")]
    BoundHintViolated { bound: u64, detail: String },

    #[error("input must be a positive integer")]
    NonPositiveInput,

    #[error("digit {digit} at position {index} is outside [0, {limit})")]
    DigitOutOfRange {
        index: usize,
        digit: String,
        limit: String,
    },

    #[error("numeral has a zero leading digit")]
    ZeroLeadingDigit,

    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),

    #[error("forbidden digit set at position {index} is empty")]
    EmptyForbiddenSet { index: usize },

    #[error("forbidden digit set at position {index} covers every digit in [0, {limit})")]
    ForbiddenSetNotProper { index: usize, limit: String },

    #[error("forbidden-set override at position {index}, which is not a constrained position")]
    OverrideOutsideIndexSet { index: usize },

    #[error("fixed bit at position {index} is {bit}, expected 0 or 1")]
    BitOutOfRange { index: usize, bit: u64 },

    #[error("fixed-bit map is empty")]
    EmptyBitMap,

    #[error("enumeration budget of {budget} elements exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("the quotient sequence declares no uniform bound")]
    MissingBoundHint,

    #[error("delta must lie strictly between 0 and 1, got {0}")]
    InvalidDelta(String),

    #[error("the missing-digit set is finite")]
    SetIsFinite,

    #[error("finiteness of the missing-digit set could not be decided")]
    SetFinitenessUnknown,

    #[error("input out of range: {0}")]
    InputOutOfRange(String),

    #[error("range [{lo}, {hi}] is invalid or exceeds the oracle cap of {cap}")]
    RangeTooLarge { lo: u64, hi: u64, cap: u64 },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("{path}: {message}")]
    ConfigInvalid { path: String, message: String },
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, err: Error) -> Error {
        match err {
            Error::ConfigInvalid { .. } => err,
            other => Error::ConfigInvalid {
                path: path.into(),
                message: other.to_string(),
            },
        }
    }
}
