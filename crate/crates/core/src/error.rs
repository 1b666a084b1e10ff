use thiserror::Error;

/// Errors raised by the arithmetic, certificate and driver layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    /// The result cannot be told apart from zero at the working precision.
    /// The payload is the norm bound below which the true value lies.
    #[error("precision exhausted: result is indistinguishable from zero (|x| <= {0})")]
    PrecisionExhausted(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("no root of order {p} in the field: {reason}")]
    NoRootInField { p: u64, reason: String },

    #[error("norm comparison undecidable after {depth} refinements")]
    UndecidableAtDepth { depth: u32 },

    #[error("incompatible operands: {0}")]
    Incompatible(String),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("tower obstruction at depth {depth}: {reason}")]
    TowerObstruction { depth: usize, reason: String },

    #[error("missing certificate: {0}")]
    MissingCertificate(String),

    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    #[error("undeclared radius `{0}`")]
    UndeclaredRadius(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
