//! Error type shared by every module.

use thiserror::Error;

/// Failure categories surfaced by the library. The CLI maps them onto exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or inconsistent user input (unknown variable, parse failure, bad job).
    #[error("input error: {0}")]
    Input(String),
    /// An operation was called outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// The input is valid but lies outside what the implementation handles.
    #[error("scope error: {0}")]
    Scope(String),
    /// The operation does not exist for the given field (for example p-th roots in characteristic 0).
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    /// The computation produced a degenerate object (for example a zero strict transform).
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
