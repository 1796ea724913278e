use thiserror::Error;

/// Errors raised by the algebra and module layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VarMismatch { left: usize, right: usize },

    #[error("shift length {shift} does not match {nvars} variables")]
    ShiftLength { shift: usize, nvars: usize },

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("invalid index: {0}")]
    InvalidIndex(String),

    #[error("parameter a_{0} is zero")]
    ZeroParameter(usize),

    #[error("presentation is not graded")]
    NotGraded,

    #[error("missing action matrix for {0}")]
    MissingGenerator(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("relations do not hold: {0}")]
    Unverified(String),

    #[error("internal invariant breached ({what}): {detail}")]
    InvariantBreach { what: String, detail: String },

    #[error("out of scope: {0}")]
    OutOfScope(String),

    #[error("truncation overflow: index {index} exceeds {limit}")]
    Truncation { index: usize, limit: usize },

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
