//! Error type shared by all modules.

use alloc::string::String;
use core::fmt;

/// Crate-wide error.
///
/// The variants are grouped by how a caller should react: [`Error::Parse`],
/// [`Error::Invalid`] and [`Error::Unsupported`] mean the input (or a
/// parameter) must change, [`Error::Budget`] means a configured resource
/// limit was exhausted before an answer was reached, and [`Error::Internal`]
/// signals a broken invariant inside this crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input text could not be parsed.
    Parse(String),
    /// A parameter is out of range or inconsistent with the data.
    Invalid(String),
    /// The operation is not defined for this input (e.g. a non-primitive
    /// substitution, a periodic subshift, mismatched expansion rates).
    Unsupported(String),
    /// A search or iteration limit was exhausted.
    Budget(String),
    /// An internal invariant failed; always a bug in this crate.
    Internal(String),
}

impl Error {
    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub(crate) fn budget(msg: impl Into<String>) -> Self {
        Error::Budget(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse(m) => write!(f, "parse error: {m}"),
            Error::Invalid(m) => write!(f, "invalid parameter: {m}"),
            Error::Unsupported(m) => write!(f, "unsupported input: {m}"),
            Error::Budget(m) => write!(f, "budget exhausted: {m}"),
            Error::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl core::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
