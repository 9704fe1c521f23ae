use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("block {block}: expected {expected_rows}x{expected_cols}, found {rows}x{cols}")]
    BlockShape {
        block: &'static str,
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },

    #[error("dimension mismatch for {what}: expected {expected}, found {found}")]
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("non-finite entry encountered in {0}")]
    NonFinite(&'static str),

    #[error("matrix exponential overflow: norm {norm:.3e} exceeds {limit:.1e}")]
    ExpOverflow { norm: f64, limit: f64 },

    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e} > tol {tol:.1e})")]
    NotHermitian { asymmetry: f64, tol: f64 },

    #[error(
        "matrix is not positive definite (smallest eigenvalue {min_eig:.3e} <= tol {tol:.1e})"
    )]
    NotPositiveDefinite { min_eig: f64, tol: f64 },

    #[error("singular resolvent (I - K/{n}) : K is not dissipative")]
    SingularResolvent { n: u32 },

    #[error("singular matrix in {0}")]
    Singular(&'static str),

    #[error("negative time {0}")]
    NegativeTime(f64),

    #[error("time must be positive, got {0}")]
    NonPositiveTime(f64),

    #[error("invalid interval: a = {a} > b = {b}")]
    InvalidInterval { a: f64, b: f64 },

    #[error("invalid step function: {0}")]
    InvalidStep(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("generator is not contractive (defect {defect:.3e} > tol {tol:.1e})")]
    NotContractive { defect: f64, tol: f64 },

    #[error("state dimension {required} exceeds memory budget {allowed}")]
    BudgetExceeded { required: u128, allowed: u128 },

    #[error("parse error: {0}")]
    Parse(String),
}
