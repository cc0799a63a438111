use thiserror::Error;

/// Errors produced by state construction and the decision pipeline.
#[derive(Debug, Error)]
pub enum UdaError {
    #[error("matrix is not Hermitian: max |M - M^dag| entry = {defect:.3e}")]
    NotHermitian { defect: f64 },
    #[error("matrix is not positive semidefinite: min eigenvalue = {min_eig:.3e}")]
    NotPositive { min_eig: f64 },
    #[error("matrix trace {trace:.6e} cannot be normalized")]
    BadTrace { trace: f64 },
    #[error("matrix side {side} does not match product of dims {expected}")]
    SideMismatch { side: usize, expected: usize },
    #[error("total dimension {dim} exceeds the configured maximum {max}")]
    DimensionOverflow { dim: usize, max: usize },
    #[error("states live on different dimensions")]
    DimMismatch,
    #[error("invalid subsystem set: {0}")]
    InvalidSubsystemSet(String),
    #[error("invalid permutation of {0} systems")]
    InvalidPermutation(usize),
    #[error("marginal order k={k} is out of range for {n} systems")]
    KOutOfRange { k: usize, n: usize },
    #[error("matrix is not unitary within tolerance (defect {defect:.3e})")]
    NotUnitary { defect: f64 },
    #[error("Kraus set is not trace preserving (defect {defect:.3e})")]
    NotTracePreserving { defect: f64 },
    #[error("operation requires {expected}, got {found}")]
    ShapePrecondition { expected: String, found: String },
    #[error("rank precondition failed: {0}")]
    RankPrecondition(String),
    #[error("witness recipe does not apply: {0}")]
    RecipeInapplicable(String),
    #[error("counting overflow: {0}")]
    CountOverflow(String),
    #[error("invalid input document: {0}")]
    BadDocument(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, UdaError>;
