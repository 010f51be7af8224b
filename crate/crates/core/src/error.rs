use thiserror::Error;

/// Failure modes shared by every operation in the crate.
///
/// The variants map onto the CLI exit-code contract: [`Error::Invariant`] is
/// the only one that signals a bug (exit code 2), everything else is a
/// problem with the caller's input (exit code 1).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed arguments: unknown nodes, overlapping sets, bad labels, multi-edges.
    #[error("input error: {0}")]
    Input(String),
    /// Well-formed input outside an operation's domain (e.g. not a chain graph).
    #[error("domain error: {0}")]
    Domain(String),
    /// An exhaustive computation would exceed the configured node bound.
    #[error("resource limit: {0}")]
    Resource(String),
    /// Something that must hold by construction did not.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    /// A trace could not be replayed as recorded.
    #[error("corrupt trace: {0}")]
    CorruptTrace(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
