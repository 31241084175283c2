use thiserror::Error;

/// Errors produced by the numerical kernels and the symplectic toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} is not even")]
    OddDimension(usize),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not symmetric (relative asymmetry {asymmetry:.3e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is not skew-symmetric (relative asymmetry {asymmetry:.3e})")]
    NotSkewSymmetric { asymmetry: f64 },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:.6e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("skew-symmetric matrix is numerically singular (smallest block angle {smallest:.3e})")]
    SingularSkew { smallest: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("general eigensolver failed to converge")]
    SchurFailure,

    #[error("cannot pair eigenvectors in a cluster of size {size} (cluster gap {gap:.3e})")]
    ClusterFailure { size: usize, gap: f64 },

    #[error("numerical contract violated: {what} residual {residual:.3e} exceeds {bound:.3e}")]
    Residual {
        what: &'static str,
        residual: f64,
        bound: f64,
    },

    #[error("subspace is empty where a positive dimension is required")]
    EmptySubspace,

    #[error("vector lies outside the span of the basis (relative residual {residual:.3e})")]
    OutsideSpan { residual: f64 },

    #[error("vectors are not symplectically orthonormal (deviation {deviation:.3e})")]
    NotSymplecticallyOrthonormal { deviation: f64 },

    #[error("sharp subspace has odd dimension {0}")]
    SharpParity(usize),

    #[error("subspace is not symplectic")]
    NotSymplecticSubspace,

    #[error("vectors are linearly dependent (residual norm {residual:.3e})")]
    RankDeficient { residual: f64 },

    #[error("skew-orthogonality constraint violated (deviation {deviation:.3e})")]
    SkewConstraint { deviation: f64 },

    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),

    #[error("chain hypothesis violated: {0}")]
    ChainHypothesis(String),

    #[error("construction failed after {attempts} attempts: {reason}")]
    ConstructionFailed { attempts: usize, reason: String },

    #[error("spectral functional `{name}` failed validation: {reason}")]
    FunctionalValidation { name: String, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
