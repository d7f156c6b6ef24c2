use thiserror::Error;

/// Errors reported by the arithmetic and multiplication routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("context mismatch: p = {left} vs p = {right}")]
    ContextMismatch { left: u64, right: u64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular linear system")]
    Singular,
    #[error("index {index} out of range {range}")]
    IndexOutOfRange { index: i64, range: String },
    #[error("probability {0} is outside (0, 1)")]
    BadProbability(f64),
    #[error("need at least {needed} evaluations, got {got}")]
    TooFewValues { needed: usize, got: usize },
    #[error("locator polynomial has {found} roots among the normal basis, expected {expected}")]
    MissingRoots { found: usize, expected: usize },
    #[error("no polynomial with at most {bound} terms fits the values")]
    NoSparseFit { bound: usize },
    #[error("empty layer set")]
    EmptyLayerSet,
    #[error("phi is neither multiplicative nor anti-multiplicative on the probe pair")]
    InconsistentOrientation,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dim_err(expected: impl ToString, got: impl ToString) -> Error {
    Error::DimensionMismatch {
        expected: expected.to_string(),
        got: got.to_string(),
    }
}
