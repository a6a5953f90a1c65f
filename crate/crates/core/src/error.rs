use thiserror::Error;

/// Errors raised by input validation and internal consistency checks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("genus must be at least {min}, got {genus}")]
    InvalidGenus { genus: i64, min: u32 },

    #[error("punctures must be 0 or 1, got {0}")]
    InvalidPunctures(u8),

    #[error("curve index a{index} outside the chain a1..a{max}")]
    CurveOutOfRange { index: i64, max: u32 },

    #[error("twist exponent must be a nonzero integer with a representable negation, got {0}")]
    InvalidExponent(i64),

    #[error("words live on different surfaces ({left} vs {right})")]
    SurfaceMismatch { left: String, right: String },

    #[error("integer overflow while {0}")]
    Overflow(&'static str),

    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("slope {p}/{q} is not in lowest terms with positive denominator")]
    NotLowestTerms { p: i64, q: i64 },

    #[error("expected a negative coefficient, got {0}")]
    NonNegativeCoefficient(String),

    #[error("empty curve set")]
    EmptyCurveSet,

    #[error("malformed curve system: {0}")]
    MalformedSystem(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(what: &'static str, input: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        what,
        input: input.to_string(),
        reason: reason.into(),
    }
}
