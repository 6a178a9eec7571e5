use thiserror::Error;

/// Errors produced by series validation, the distance kernels, tuning and file IO.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series has no observations")]
    Empty,
    #[error("non-finite value {value} at time index {row}, dimension {dim}")]
    NonFiniteValue { row: usize, dim: usize, value: f64 },
    #[error("row {row} has {found} dimensions, expected {expected}")]
    RaggedDimensions { row: usize, expected: usize, found: usize },
    #[error("series of length {len} is too short, need at least {min}")]
    TooShort { len: usize, min: usize },
    #[error("norm order p must be >= 1, got {0}")]
    InvalidP(f64),
    #[error("series lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("series shapes differ: {left_len}x{left_dims} vs {right_len}x{right_dims}")]
    ShapeMismatch { left_len: usize, left_dims: usize, right_len: usize, right_dims: usize },
    #[error("gap vector has {found} entries, series have {expected} dimensions")]
    GapDimensionMismatch { expected: usize, found: usize },
    #[error("vectors have different dimensions: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("need at least {min} training instances, got {found}")]
    TooFewInstances { min: usize, found: usize },
    #[error("datasets are incompatible: {0}")]
    IncompatibleDatasets(String),
    #[error("no @data section found")]
    MissingDataSection,
    #[error("line {line}: series shape {found_len}x{found_dims} differs from {expected_len}x{expected_dims}")]
    RaggedSeries { line: usize, expected_len: usize, expected_dims: usize, found_len: usize, found_dims: usize },
    #[error("line {line}, dimension {dim}, position {position}: cannot parse {token:?} as a number")]
    UnparsableValue { line: usize, dim: usize, position: usize, token: String },
    #[error("line {line}: missing class label")]
    MissingLabel { line: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
