use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },
    #[error("duplicate basis label {0:?}")]
    DuplicateLabel(Vec<u32>),
    #[error("non-positive gram weight {weight} for label {label:?}")]
    NonPositiveGram { label: Vec<u32>, weight: f64 },
    #[error("index {index} out of bounds for dimension {dim}")]
    IndexOutOfBounds { index: usize, dim: usize },
    #[error("operator is not self-adjoint (max asymmetry {asymmetry:e})")]
    NotSelfAdjoint { asymmetry: f64 },
    #[error("grade mismatch: cannot combine {0} and {1} operators")]
    GradeMismatch(&'static str, &'static str),
    #[error("truncation overflow: {0}")]
    TruncationOverflow(String),
    #[error("wrong basis kind: expected {expected}, got {got}")]
    WrongKind { expected: String, got: String },
    #[error("invalid truncation: {0}")]
    InvalidTruncation(String),
    #[error("incomplete cocycle table: {0}")]
    IncompleteTable(String),
    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("wrong level: expected {expected}, got {got:?}")]
    WrongLevel { expected: i64, got: Option<i64> },
    #[error("cut-off normalization fails at point {point}: sum is {sum}")]
    Normalization { point: usize, sum: f64 },
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("methods disagree: {0}")]
    Disagreement(String),
    #[error("divergent sequence: {0}")]
    Divergent(String),
    #[error("sequence has no analytic rule")]
    NoAnalyticRule,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
