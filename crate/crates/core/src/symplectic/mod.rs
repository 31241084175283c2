//! The symplectic form, symplectic eigenvalues and the Williamson normal form.

mod compress;
mod eigenvalues;
mod index;
mod pd;
mod random;
mod williamson;

pub use compress::{compress, Compression, TUPLE_TOL};
pub use eigenvalues::{symplectic_eigenvalues, Method};
pub use index::IndexSet;
pub use pd::PositiveDefiniteMatrix;
pub use random::{random_pd, random_spectrum, random_symmetric, random_symplectic, symplectic_exp, PdMode};
pub use williamson::{eigenpair_residual, williamson, WilliamsonDecomposition, WILLIAMSON_TOL_A, WILLIAMSON_TOL_J};

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, DenseVector};

/// The standard symplectic form `J = [[0, I_n], [−I_n, 0]]` on `R^{2n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticForm {
    half_dim: usize,
}

impl SymplecticForm {
    pub fn new(half_dim: usize) -> Self {
        Self { half_dim }
    }

    /// Form matching a vector or matrix dimension `2n`.
    pub fn for_dim(dim: usize) -> Result<Self> {
        if !dim.is_multiple_of(2) {
            return Err(Error::OddDimension(dim));
        }
        Ok(Self::new(dim / 2))
    }

    pub fn half_dim(&self) -> usize {
        self.half_dim
    }

    pub fn dim(&self) -> usize {
        2 * self.half_dim
    }

    pub fn matrix(&self) -> DenseMatrix {
        let n = self.half_dim;
        let mut j = DenseMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            j[(i, n + i)] = 1.0;
            j[(n + i, i)] = -1.0;
        }
        j
    }

    /// `J x = (x_p, −x_q)` for `x = (x_q, x_p)`.
    pub fn apply(&self, x: &DenseVector) -> DenseVector {
        let n = self.half_dim;
        DenseVector::from_fn(2 * n, |i, _| if i < n { x[n + i] } else { -x[i - n] })
    }

    /// `J M`, row-permuted with signs.
    pub fn apply_matrix(&self, m: &DenseMatrix) -> DenseMatrix {
        let n = self.half_dim;
        DenseMatrix::from_fn(2 * n, m.ncols(), |i, c| if i < n { m[(n + i, c)] } else { -m[(i - n, c)] })
    }

    /// `‖Mᵀ J M − J‖_F`, zero exactly for symplectic `M`.
    pub fn symplectic_defect(&self, m: &DenseMatrix) -> f64 {
        (m.transpose() * self.apply_matrix(m) - self.matrix()).norm()
    }
}

/// The symplectic inner product `(x, y) = ⟨x, J y⟩`.
pub fn symplectic_inner(x: &DenseVector, y: &DenseVector) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    let form = SymplecticForm::for_dim(x.len())?;
    Ok(x.dot(&form.apply(y)))
}

/// A symplectic eigenvector pair: `A u = d J v`, `A v = −d J u`, `⟨u, J v⟩ = 1`.
#[derive(Debug, Clone)]
pub struct SymplecticEigenpair {
    pub u: DenseVector,
    pub v: DenseVector,
    pub d: f64,
}

/// Vectors `x_1..x_k, y_1..y_k` that are meant to be symplectically
/// orthonormal: `⟨x_i, J x_j⟩ = ⟨y_i, J y_j⟩ = 0`, `⟨x_i, J y_j⟩ = δ_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTupleSet {
    pub xs: Vec<DenseVector>,
    pub ys: Vec<DenseVector>,
}

impl SymplecticTupleSet {
    pub fn new(xs: Vec<DenseVector>, ys: Vec<DenseVector>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::DimensionMismatch {
                expected: xs.len(),
                found: ys.len(),
            });
        }
        if let Some(first) = xs.first() {
            let dim = first.len();
            SymplecticForm::for_dim(dim)?;
            if let Some(bad) = xs.iter().chain(ys.iter()).find(|v| v.len() != dim) {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: bad.len(),
                });
            }
        }
        Ok(Self { xs, ys })
    }

    /// Splits the columns `(x_1..x_k, y_1..y_k)` of a `2n × 2k` matrix.
    pub fn from_columns(m: &DenseMatrix) -> Result<Self> {
        if !m.ncols().is_multiple_of(2) {
            return Err(Error::OddDimension(m.ncols()));
        }
        let k = m.ncols() / 2;
        let xs = (0..k).map(|j| m.column(j).into_owned()).collect();
        let ys = (0..k).map(|j| m.column(k + j).into_owned()).collect();
        Self::new(xs, ys)
    }

    /// First `k` columns of a `2n × 2n` symplectic matrix paired with the
    /// matching columns of its second half, selected by zero-based index.
    pub fn from_symplectic_columns(m: &DenseMatrix, indices: &[usize]) -> Result<Self> {
        let n = m.ncols() / 2;
        let xs = indices.iter().map(|&i| m.column(i).into_owned()).collect();
        let ys = indices.iter().map(|&i| m.column(n + i).into_owned()).collect();
        Self::new(xs, ys)
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.xs.first().map_or(0, |x| x.len())
    }

    /// Column matrix `(x_1..x_k, y_1..y_k)`.
    pub fn matrix(&self) -> DenseMatrix {
        let cols: Vec<DenseVector> = self.xs.iter().chain(self.ys.iter()).cloned().collect();
        if cols.is_empty() {
            return DenseMatrix::zeros(0, 0);
        }
        DenseMatrix::from_columns(&cols)
    }

    /// Largest deviation of `Sᵀ J S` from `J_k`, each entry scaled by
    /// `max(1, ‖s_i‖ ‖s_j‖)`.
    pub fn deviation(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let s = self.matrix();
        let form = SymplecticForm::for_dim(s.nrows()).expect("validated at construction");
        let gram = s.transpose() * form.apply_matrix(&s);
        let target = SymplecticForm::new(self.len()).matrix();
        let norms: Vec<f64> = s.column_iter().map(|c| c.norm()).collect();
        let mut worst: f64 = 0.0;
        for i in 0..gram.nrows() {
            for j in 0..gram.ncols() {
                let scale = (norms[i] * norms[j]).max(1.0);
                worst = worst.max((gram[(i, j)] - target[(i, j)]).abs() / scale);
            }
        }
        worst
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        let deviation = self.deviation();
        if deviation > tol {
            return Err(Error::NotSymplecticallyOrthonormal { deviation });
        }
        Ok(())
    }

    /// `Σ_j (⟨x_j, A x_j⟩ + ⟨y_j, A y_j⟩) / 2`
    pub fn half_trace_sum(&self, a: &DenseMatrix) -> f64 {
        self.half_traces(a).iter().sum()
    }

    /// The vector of `(⟨x_j, A x_j⟩ + ⟨y_j, A y_j⟩) / 2`.
    pub fn half_traces(&self, a: &DenseMatrix) -> Vec<f64> {
        self.xs
            .iter()
            .zip(&self.ys)
            .map(|(x, y)| 0.5 * (x.dot(&(a * x)) + y.dot(&(a * y))))
            .collect()
    }
}
