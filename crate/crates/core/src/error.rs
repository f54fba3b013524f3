//! Error type shared across the crate.

use alloc::string::String;
use core::fmt;

/// Any failure reported by this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A function argument violated its documented contract.
    InvalidArgument(String),
    /// An operation was applied to an object in a state that cannot accept it,
    /// e.g. stepping an episode that already terminated.
    InvalidState(String),
    /// A score whose defining formula is degenerate for the given data,
    /// e.g. R^2 when the targets have zero variance.
    UndefinedScore(String),
    /// A configuration field failed validation.
    InvalidConfig { field: &'static str, reason: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::InvalidState(msg) => write!(f, "invalid state: {msg}"),
            Error::UndefinedScore(msg) => write!(f, "undefined score: {msg}"),
            Error::InvalidConfig { field, reason } => {
                write!(f, "invalid config field `{field}`: {reason}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
