//! Error type shared by every module of the library.

use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A text input (graph, weights, forest, family) is malformed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Structurally well-formed input that violates a documented requirement,
    /// e.g. a non-P6-free graph handed to the family builder.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A desk-scale enumeration exceeded its configured cap.
    #[error("size cap exceeded: {what} (limit {limit})")]
    SizeCap { what: String, limit: usize },

    /// An operation's precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An internal invariant failed; this indicates a bug or a bound that is
    /// too tight, never bad user input.
    #[error("invariant violated: {0}")]
    Invariant(String),

    /// An automaton transition was undefined for an encountered input.
    #[error("automaton error: {0}")]
    Automaton(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn cap(what: impl Into<String>, limit: usize) -> Self {
        Error::SizeCap {
            what: what.into(),
            limit,
        }
    }
}

/// Library result alias.
pub type Result<T> = std::result::Result<T, Error>;
