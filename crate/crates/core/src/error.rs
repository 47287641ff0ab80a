use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{op}: expected a square matrix, got {rows}x{cols}")]
    NotSquare { op: &'static str, rows: usize, cols: usize },

    #[error("{op}: dimension mismatch, expected {expected:?}, found {found:?}")]
    DimensionMismatch { op: &'static str, expected: (usize, usize), found: (usize, usize) },

    #[error("invalid interval: lower endpoint {lo} exceeds upper endpoint {hi}")]
    InvalidInterval { lo: String, hi: String },

    #[error("vertex index has {found} bits but the matrix has {expected} nondegenerate entries")]
    VertexBitMismatch { expected: usize, found: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("vertex budget exceeded: 2^{needed} vertices needed, budget is 2^{budget}")]
    BudgetExceeded { needed: u32, budget: u32 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("entry ({row}, {col}) lies outside its interval")]
    OutOfBounds { row: usize, col: usize },

    #[error("sign vector length {found} does not match dimension {expected}")]
    SignVectorLength { expected: usize, found: usize },
}
