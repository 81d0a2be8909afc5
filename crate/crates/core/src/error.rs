use thiserror::Error;

/// Errors raised by the library.
///
/// The variants map onto the CLI exit codes: everything except
/// [`Error::Internal`] is a violated precondition and exits with status 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A precondition on the mathematical input does not hold.
    #[error("domain error: {0}")]
    Domain(String),

    /// Division by zero or a similar arithmetic impossibility.
    #[error("arithmetic error: {0}")]
    Arithmetic(String),

    /// Operands live in different quadratic fields.
    #[error("field mismatch: sqrt({0}) vs sqrt({1})")]
    FieldMismatch(String, String),

    /// A digit stream ran out before the requested index.
    #[error("digit stream exhausted: need index {needed}, have {available} digits")]
    Length { needed: i64, available: usize },

    /// The input encodes a rational number where an irrational is required.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Text input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// An enclosure is too wide to decide a floor or a sign; retry with more bits.
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
