use super::{PositiveDefiniteMatrix, SymplecticEigenpair, SymplecticForm, SymplecticTupleSet};
use crate::error::{Error, Result};
use crate::linalg::{pd_sqrt_invsqrt, skew_canonical, DenseMatrix, DenseVector};

/// Bound on `‖Mᵀ A M − diag(D, D)‖_F / ‖A‖_F`.
pub const WILLIAMSON_TOL_A: f64 = 1e-8;
/// Bound on `‖Mᵀ J M − J‖_F`.
pub const WILLIAMSON_TOL_J: f64 = 1e-9;

/// `Mᵀ A M = diag(D, D)` with `M` symplectic and `d` ascending.
#[derive(Debug, Clone)]
pub struct WilliamsonDecomposition {
    pub m: DenseMatrix,
    pub d: DenseVector,
}

impl WilliamsonDecomposition {
    pub fn half_dim(&self) -> usize {
        self.d.len()
    }

    /// `diag(D, D)`
    pub fn normal_form(&self) -> DenseMatrix {
        let n = self.half_dim();
        DenseMatrix::from_fn(2 * n, 2 * n, |i, j| if i == j { self.d[i % n] } else { 0.0 })
    }

    /// `‖Mᵀ A M − diag(D, D)‖_F / ‖A‖_F`
    pub fn residual_a(&self, a: &DenseMatrix) -> f64 {
        (self.m.transpose() * a * &self.m - self.normal_form()).norm() / a.norm()
    }

    /// `‖Mᵀ J M − J‖_F`
    pub fn residual_j(&self) -> f64 {
        SymplecticForm::new(self.half_dim()).symplectic_defect(&self.m)
    }

    /// The pair `(m_j, m_{n+j})` with its symplectic eigenvalue; `j` zero-based.
    pub fn eigenpair(&self, j: usize) -> SymplecticEigenpair {
        let n = self.half_dim();
        SymplecticEigenpair {
            u: self.m.column(j).into_owned(),
            v: self.m.column(n + j).into_owned(),
            d: self.d[j],
        }
    }

    /// Eigen-tuple `(u_{i_1}..u_{i_k}, v_{i_1}..v_{i_k})` for zero-based indices.
    pub fn eigen_tuple(&self, indices: &[usize]) -> SymplecticTupleSet {
        SymplecticTupleSet::from_symplectic_columns(&self.m, indices)
            .expect("columns of M have matching even length")
    }
}

/// Williamson normal form of a positive definite matrix.
///
/// With `K = A^{-1/2} J A^{-1/2}` in real canonical form `Qᵀ K Q = [[0, Ω], [−Ω, 0]]`,
/// the symplectic eigenvalues are `1/ω` and `M = A^{-1/2} Q (D^{1/2} ⊕ D^{1/2})`
/// after reversing the block order so that `d` ascends.
pub fn williamson(a: &PositiveDefiniteMatrix) -> Result<WilliamsonDecomposition> {
    let n = a.half_dim();
    let form = SymplecticForm::new(n);
    let (_, inv_sqrt) = pd_sqrt_invsqrt(a.matrix())?;
    let k = &inv_sqrt * form.apply_matrix(&inv_sqrt);
    let k = (&k - k.transpose()) * 0.5;
    let canonical = skew_canonical(&k, 1e-10)?;

    let d = DenseVector::from_fn(n, |j, _| 1.0 / canonical.block_angles[n - 1 - j]);
    let q = &canonical.rotation;
    let mut scaled = DenseMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        let src = n - 1 - j;
        let s = d[j].sqrt();
        scaled.set_column(j, &(q.column(src) * s));
        scaled.set_column(n + j, &(q.column(n + src) * s));
    }
    let m = inv_sqrt * scaled;
    let decomposition = WilliamsonDecomposition { m, d };

    let residual_a = decomposition.residual_a(a.matrix());
    if residual_a > WILLIAMSON_TOL_A {
        return Err(Error::Residual {
            what: "Williamson MᵀAM",
            residual: residual_a,
            bound: WILLIAMSON_TOL_A,
        });
    }
    let residual_j = decomposition.residual_j();
    if residual_j > WILLIAMSON_TOL_J {
        return Err(Error::Residual {
            what: "Williamson MᵀJM",
            residual: residual_j,
            bound: WILLIAMSON_TOL_J,
        });
    }
    Ok(decomposition)
}

/// `(‖A u − d J v‖₂, ‖A v + d J u‖₂)`
pub fn eigenpair_residual(a: &DenseMatrix, pair: &SymplecticEigenpair) -> Result<(f64, f64)> {
    let form = SymplecticForm::for_dim(a.nrows())?;
    if pair.u.len() != a.nrows() || pair.v.len() != a.nrows() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: pair.u.len().min(pair.v.len()),
        });
    }
    let r1 = (a * &pair.u - form.apply(&pair.v) * pair.d).norm();
    let r2 = (a * &pair.v + form.apply(&pair.u) * pair.d).norm();
    Ok((r1, r2))
}
