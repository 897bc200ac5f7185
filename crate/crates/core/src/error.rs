use thiserror::Error;

/// Errors shared by all modules.
///
/// The variants are grouped by how callers should react: `Parse`, `Input`
/// and `Config` indicate bad user input, `BoundExceeded` indicates a refusal
/// to start a search larger than the configured state bound, and
/// `Inconsistent` reports a cross-checker contradiction that should never
/// occur on a correct build.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed wire-format text; `pos` is the byte offset of the offending
    /// token.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// A value outside its domain (alternative id out of range, empty set
    /// operand, dimension mismatch, ...).
    #[error("invalid input: {0}")]
    Input(String),

    /// A rule or query that is not evaluable at the requested size.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// The full-profile space exceeds the configured search bound.
    #[error("search space of {required} full profiles exceeds the bound of {limit}")]
    BoundExceeded { required: u128, limit: u64 },

    /// Two independent checkers disagreed; this is a fatal diagnostic.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
