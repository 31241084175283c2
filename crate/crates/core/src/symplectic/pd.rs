use crate::error::{Error, Result};
use crate::linalg::{ensure_finite, ensure_square, relative_asymmetry, sym_eig, symmetrize, DenseMatrix};

/// Accepted relative asymmetry `‖A − Aᵀ‖_F / ‖A‖_F` for caller-supplied input.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Condition numbers above this get flagged in reports.
pub const ILL_CONDITIONED: f64 = 1e12;

/// A validated `2n × 2n` real symmetric positive definite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveDefiniteMatrix {
    matrix: DenseMatrix,
    min_eigenvalue: f64,
    max_eigenvalue: f64,
}

impl PositiveDefiniteMatrix {
    pub fn new(m: DenseMatrix) -> Result<Self> {
        let dim = ensure_square(&m)?;
        ensure_finite(&m)?;
        if dim == 0 || dim % 2 != 0 {
            return Err(Error::OddDimension(dim));
        }
        let asymmetry = relative_asymmetry(&m);
        if asymmetry > SYMMETRY_TOL {
            return Err(Error::NotSymmetric { asymmetry });
        }
        let matrix = symmetrize(&m);
        let eig = sym_eig(&matrix, SYMMETRY_TOL)?;
        let min_eigenvalue = eig.min_eigenvalue();
        if !(min_eigenvalue > 0.0) {
            return Err(Error::NotPositiveDefinite { min_eigenvalue });
        }
        let max_eigenvalue = eig.eigenvalues[dim - 1];
        Ok(Self {
            matrix,
            min_eigenvalue,
            max_eigenvalue,
        })
    }

    /// Symmetrizes before validating; for matrices assembled internally
    /// (congruences, sums) where rounding breaks exact symmetry.
    pub fn from_rounded(m: DenseMatrix) -> Result<Self> {
        Self::new(symmetrize(&m))
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn half_dim(&self) -> usize {
        self.dim() / 2
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    pub fn condition_number(&self) -> f64 {
        self.max_eigenvalue / self.min_eigenvalue
    }

    pub fn is_ill_conditioned(&self) -> bool {
        self.condition_number() > ILL_CONDITIONED
    }

    /// `Mᵀ A M` for any `2n × 2k` matrix `M` of full column rank.
    pub fn congruence(&self, m: &DenseMatrix) -> Result<Self> {
        Self::from_rounded(m.transpose() * &self.matrix * m)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Self::from_rounded(&self.matrix + &other.matrix)
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        Self::new(&self.matrix * c)
    }
}
