use thiserror::Error;

/// Errors raised by the cooling library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Operands that cannot be combined, e.g. bit strings of different widths.
    #[error("usage error: {0}")]
    Usage(String),

    /// A machine document or parameter failed validation.
    #[error("invalid `{field}`: {message}")]
    Validation { field: String, message: String },

    /// The requested size exceeds what the operation can enumerate.
    #[error("{what} = {value} exceeds the supported maximum of {max}")]
    TooLarge {
        what: &'static str,
        value: usize,
        max: usize,
    },

    #[error("cost matrix requires a non-empty graph")]
    EmptyGraph,

    #[error("cost matrix is not square: {rows} rows, row {row} has {cols} entries")]
    NotSquare {
        rows: usize,
        row: usize,
        cols: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),

    /// An internal invariant was violated.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn width_mismatch(a: usize, b: usize) -> Self {
        Error::Usage(format!("bit string widths differ: {a} vs {b}"))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
