use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix entry is not finite")]
    NonFinite,
    #[error("entry buffer has length {found}, expected {expected}")]
    BadLength { expected: usize, found: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max |m - m^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPositive { eigenvalue: f64 },
    #[error("trace {trace} differs from 1")]
    BadTrace { trace: f64 },
    #[error("matrix is not unitary (max |u^dagger u - I| = {defect:e})")]
    NotUnitary { defect: f64 },
    #[error("matrix is singular")]
    Singular,
    #[error("subsystem shape {dims:?} does not match dimension {dim}")]
    ShapeMismatch { dims: Vec<usize>, dim: usize },
    #[error("invalid subsystem selection: {0}")]
    BadSubsystems(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid quantum operation: {0}")]
    InvalidOperation(String),
    #[error("unsupported operation variant: {0}")]
    Unsupported(String),
    #[error("dilation failed: {0}")]
    Dilation(String),
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("optimizer failed: {0}")]
    Optimizer(String),
}

pub type Result<T> = std::result::Result<T, Error>;
