use thiserror::Error;

/// Errors raised by algebra, channel and recovery constructions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(&'static str),

    #[error("operands belong to different algebras")]
    AlgebraMismatch,

    #[error("block {block} has shape {rows}x{cols}, expected {expected}x{expected}")]
    BlockShape {
        block: usize,
        rows: usize,
        cols: usize,
        expected: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("exponent p = {0} is outside the admissible range")]
    InvalidExponent(f64),

    #[error("element is not Hermitian (asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("element is not positive (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("spectrum reaches {min_eigenvalue:e}, at or below the floor {floor:e}")]
    BelowFloor { min_eigenvalue: f64, floor: f64 },

    #[error("state has trace {trace}, expected 1")]
    NotNormalized { trace: f64 },

    #[error("invertibility floor {floor:e} is infeasible (must lie in (0, {bound:e}))")]
    InfeasibleFloor { floor: f64, bound: f64 },

    #[error("map leaks out of the target block structure (residual {residual:e})")]
    BlockLeak { residual: f64 },

    #[error("Choi matrix has eigenvalue {min_eigenvalue:e} below the positivity floor")]
    NotCompletelyPositive { min_eigenvalue: f64 },

    #[error("weighted trace is not preserved (residual {residual:e})")]
    NotTracePreserving { residual: f64 },

    #[error("channel is not strict for this reference state (min eigenvalue of image {margin:e})")]
    NotStrict { margin: f64 },

    #[error("Kraus normalization matrix is singular")]
    SingularKrausSum,

    #[error("operation requires a single-block algebra")]
    MultiBlock,

    #[error("operator is not a contraction (norm {norm})")]
    NotContraction { norm: f64 },

    #[error("mixing parameter {0} is outside [0, 1]")]
    InvalidMixture(f64),

    #[error("numerical breakdown: Choi eigenvalue {min_eigenvalue:e}")]
    NumericalBreakdown { min_eigenvalue: f64 },

    #[error("empty Kraus family")]
    EmptyKraus,
}

pub type Result<T> = core::result::Result<T, Error>;
