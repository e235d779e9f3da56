use thiserror::Error;

/// Errors raised by the bound calculus and the numerical oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("empty domain: {0}")]
    EmptyDomain(String),
    #[error("empty intersection: {0}")]
    EmptyIntersection(String),
    #[error("insufficient grid: need at least {need} points inside the domain, got {got}")]
    InsufficientGrid { need: usize, got: usize },
    #[error("level {y} is below the validity threshold {norm}")]
    BelowValidity { y: f64, norm: f64 },
    #[error("insufficient points for fit: need {need}, got {got}")]
    InsufficientPoints { need: usize, got: usize },
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("constraint violation: {0}")]
    ConstraintViolation(String),
    #[error("empty output domain: {0}")]
    EmptyOutputDomain(String),
    #[error("arity mismatch: descriptor has {expected} inputs, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("incompatible grids: {0}")]
    IncompatibleGrids(String),
    #[error("operation requires periodic grids")]
    MissingPeriodicity,
    #[error("resource limit: {ops} operations exceed the cap of {cap}")]
    ResourceLimit { ops: u128, cap: u64 },
    #[error("exponent out of range: {0}")]
    ExponentOutOfRange(String),
    #[error("unrepresentable scale: {0}")]
    UnrepresentableScale(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
