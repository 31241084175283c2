use super::{symplectic_eigenvalues, Method, PositiveDefiniteMatrix, SymplecticTupleSet};
use crate::error::{Error, Result};
use crate::linalg::DenseVector;

/// Accepted deviation of a tuple from symplectic orthonormality.
pub const TUPLE_TOL: f64 = 1e-8;

/// `A_M = Sᵀ A S` for the column matrix `S` of a symplectic tuple, with its
/// symplectic spectrum.
#[derive(Debug, Clone)]
pub struct Compression {
    pub matrix: PositiveDefiniteMatrix,
    pub d: DenseVector,
}

impl Compression {
    /// `det(A_M)`, evaluated as `(∏ d_j)²`.
    pub fn determinant(&self) -> f64 {
        self.log_determinant().exp()
    }

    pub fn log_determinant(&self) -> f64 {
        2.0 * self.d.iter().map(|x| x.ln()).sum::<f64>()
    }
}

pub fn compress(a: &PositiveDefiniteMatrix, tuple: &SymplecticTupleSet) -> Result<Compression> {
    if tuple.is_empty() {
        return Err(Error::EmptySubspace);
    }
    if tuple.ambient_dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: tuple.ambient_dim(),
        });
    }
    tuple.validate(TUPLE_TOL)?;
    let matrix = a.congruence(&tuple.matrix())?;
    let d = symplectic_eigenvalues(&matrix, Method::Williamson)?;
    Ok(Compression { matrix, d })
}
