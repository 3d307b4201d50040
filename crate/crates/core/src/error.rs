use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dim-mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("zero-span: the input vectors span only the zero vector")]
    ZeroSpan,

    #[error("not-normalized: |<v|v> - 1| = {deviation:.3e}")]
    NotNormalized { deviation: f64 },

    #[error("odd dimension {0}: cannot be split as C^2 ⊗ C^n")]
    OddDimension(usize),

    #[error("zero vector has no orthogonal complement")]
    ZeroVector,

    #[error("factorize-first: basis vectors have not been factorized")]
    FactorizeFirst,

    #[error("vector {index} is not a product vector (sigma2 = {sigma2:.3e})")]
    NotAProduct { index: usize, sigma2: f64 },

    #[error("not-a-basis: {0}")]
    NotABasis(String),

    #[error("non-finite entry in complex data")]
    NonFinite,

    #[error("shape error: {0}")]
    Shape(String),

    #[error("malformed basis: {0}")]
    MalformedBasis(String),

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("partition sums to {got}, expected {expected}")]
    PartitionMismatch { expected: usize, got: usize },

    #[error("n = {0} is outside the supported range 1..=64")]
    OutOfRange(usize),

    #[error("unknown family tag {0:?}")]
    UnknownFamily(String),

    #[error("invalid family parameters: {0}")]
    InvalidParams(String),

    #[error("parse error: {0}")]
    Parse(String),
}
