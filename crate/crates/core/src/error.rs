use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),

    #[error("label {label} out of range for local dimensions {dims:?}")]
    LabelOutOfRange { label: String, dims: Vec<usize> },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("pure state has no terms")]
    EmptyState,

    #[error("pure state has zero norm")]
    ZeroNorm,

    #[error("invalid local vector: {0}")]
    InvalidLocalVector(String),

    #[error("parameters p={p}, q={q} lie outside the simplex p,q >= 0, p+q <= 1")]
    OutsideSimplex { p: f64, q: f64 },

    #[error("dimension {dim} exceeds the configured cap {cap}")]
    CapExceeded { dim: usize, cap: usize },

    #[error("k={k} outside the allowed range {min}..={max}")]
    KOutOfRange { k: usize, min: usize, max: usize },

    #[error("site count {0} outside the supported range")]
    SiteCountOutOfRange(usize),

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("invalid density operator: {0}")]
    InvalidState(String),

    #[error("invalid fiducial: {0}")]
    InvalidFiducial(String),

    #[error("criterion requires equal local dimensions, got {0:?}")]
    UnequalDimensions(Vec<usize>),

    #[error("criterion requires qubits, got local dimensions {0:?}")]
    NotQubits(Vec<usize>),

    #[error("infeasible partition constraint: {0}")]
    InfeasiblePartition(String),

    #[error("margin does not change sign along the ray")]
    NoSignChange,

    #[error("numerical check failed: {0}")]
    Numerical(String),

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
