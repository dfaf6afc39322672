use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree must be at least 1")]
    ZeroDegree,

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("not a bijection on 0..{degree}")]
    NotBijection { degree: usize },

    #[error("index {index} out of range for degree {degree}")]
    IndexOutOfRange { index: usize, degree: usize },

    #[error("cannot shrink a degree-{from} permutation to degree {to}")]
    EmbedShrink { from: usize, to: usize },

    #[error("malformed cycle text at byte {offset}: {reason}")]
    CycleSyntax { offset: usize, reason: String },

    #[error("index {index} repeated inside one cycle")]
    RepeatedInCycle { index: usize },

    #[error("line {line}: {reason}")]
    Format { line: usize, reason: String },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("witness shape {rows}x{cols} does not match instance with {bases} bases")]
    WitnessShape { rows: usize, cols: usize, bases: usize },

    #[error("search budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("unsupported base: {0}")]
    UnsupportedBase(String),

    #[error("malformed path: {0}")]
    MalformedPath(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
