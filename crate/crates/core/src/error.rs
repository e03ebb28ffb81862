use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A caller-supplied argument violates an operation's precondition.
    #[error("{0}")]
    Argument(String),

    /// `|λ|` does not equal `|μ|·k` (or the analogous weight for the call).
    #[error("weight mismatch: |lambda|={actual}, need {expected}")]
    WeightMismatch { actual: u64, expected: u64 },

    /// A string could not be read as a partition.
    #[error("malformed partition {input:?}: {reason}")]
    MalformedPartition { input: String, reason: String },

    /// An exactness or cross-check assertion failed. Never expected.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    /// Quasi-polynomial text could not be parsed.
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    /// An identifier is neither a declared parameter nor a bound variable,
    /// or an evaluation point is missing a parameter.
    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),

    /// The argument of `floor` (or a constraint) is not affine.
    #[error("non-affine expression in {0}")]
    NonAffine(String),

    /// No candidate (period, degree) reproduces the samples exactly.
    #[error("no quasi-polynomial fit: {0}")]
    NoFit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
