//! Dense real kernels shared by the rest of the crate.
//!
//! Matrices are plain [`nalgebra::DMatrix<f64>`]; this module adds the
//! symmetric eigensolver, positive definite square roots, the real canonical
//! form of skew-symmetric matrices and a small subspace algebra on top of it.

mod eig;
mod skew;
mod subspace;

pub use eig::{pd_sqrt_invsqrt, sym_eig, SpectralDecomposition};
pub use skew::{skew_canonical, SkewCanonicalForm, CLUSTER_THRESHOLD};
pub use subspace::{orthonormalize, Subspace, INTERSECTION_TOL, RANK_TOL};


use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Generic dense real matrix.
pub type DenseMatrix = DMatrix<f64>;

/// Generic dense real vector.
pub type DenseVector = DVector<f64>;

pub(crate) fn ensure_square(m: &DenseMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

pub(crate) fn ensure_finite(m: &DenseMatrix) -> Result<()> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// `‖M − Mᵀ‖_F / ‖M‖_F`, zero for the zero matrix.
pub fn relative_asymmetry(m: &DenseMatrix) -> f64 {
    let norm = m.norm();
    if norm == 0.0 {
        return 0.0;
    }
    (m - m.transpose()).norm() / norm
}

/// `‖M + Mᵀ‖_F / ‖M‖_F`, zero for the zero matrix.
pub fn relative_skew_defect(m: &DenseMatrix) -> f64 {
    let norm = m.norm();
    if norm == 0.0 {
        return 0.0;
    }
    (m + m.transpose()).norm() / norm
}

/// `(M + Mᵀ)/2`
pub fn symmetrize(m: &DenseMatrix) -> DenseMatrix {
    (m + m.transpose()) * 0.5
}

/// Deviation of `Qᵀ Q` from the identity in the Frobenius norm.
pub fn orthogonality_defect(q: &DenseMatrix) -> f64 {
    let qtq = q.transpose() * q;
    (qtq - DenseMatrix::identity(q.ncols(), q.ncols())).norm()
}
