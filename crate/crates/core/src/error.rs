use thiserror::Error;

/// Errors raised by the computational kernels and the file layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular over Q")]
    SingularMatrix,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("configuration is not a smooth model")]
    NotSmoothModel,
    #[error("bad blowup center: {0}")]
    BadCenter(String),
    #[error("curves {0:?} do not span a negative definite bunch")]
    NotNegativeDefinite(Vec<String>),
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
    #[error("invalid boundary: {0}")]
    InvalidBoundary(String),
    #[error("boundary is not an orbifold divisor: component `{0}` has a fractional coefficient that is not 1 - 1/m")]
    NotOrbifold(String),
    #[error("boundary support is not simple normal crossing: {0}")]
    NotSnc(String),
    #[error("tower depth {requested} exceeds the cap {cap}")]
    DepthTooLarge { requested: usize, cap: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("bad ramification index: {0}")]
    BadRamification(String),
    #[error("input is inconsistent with the classification hypotheses: {0}")]
    InconsistentInput(String),
    #[error("contraction of `{0}` failed the Artin criteria")]
    ContractionFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("unknown command `{0}`")]
    UnknownCommand(String),
}

pub type Result<T> = std::result::Result<T, Error>;
