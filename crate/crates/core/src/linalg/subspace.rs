use nalgebra::SVD;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{sym_eig, DenseMatrix, DenseVector};
use crate::error::{Error, Result};

/// Singular values below this fraction of the largest one are treated as zero
/// when orthonormalizing a spanning set.
pub const RANK_TOL: f64 = 1e-10;

/// Principal directions whose sine is at most this value count as common to
/// both subspaces in [`Subspace::intersect`].
pub const INTERSECTION_TOL: f64 = 1e-8;

/// A linear subspace of `R^N` stored as an orthonormal spanning matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: DenseMatrix,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self {
            basis: DenseMatrix::zeros(ambient, 0),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            basis: DenseMatrix::identity(ambient, ambient),
        }
    }

    /// Column span of `vectors`, orthonormalized with [`RANK_TOL`].
    pub fn span(vectors: &DenseMatrix) -> Self {
        Self {
            basis: orthonormalize(vectors, RANK_TOL),
        }
    }

    pub fn span_of(vectors: &[DenseVector], ambient: usize) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        Self::span(&DenseMatrix::from_columns(vectors))
    }

    /// Span of coordinate vectors `e_i` for the given zero-based indices.
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Self {
        let mut basis = DenseMatrix::zeros(ambient, indices.len());
        for (c, &i) in indices.iter().enumerate() {
            basis[(i, c)] = 1.0;
        }
        Self { basis }
    }

    /// Uniformly random subspace of the given dimension.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, ambient: usize, dim: usize) -> Self {
        let g = DenseMatrix::from_fn(ambient, dim, |_, _| rng.sample(StandardNormal));
        Self::span(&g)
    }

    pub fn basis(&self) -> &DenseMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient(&self) -> usize {
        self.basis.nrows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn project(&self, x: &DenseVector) -> DenseVector {
        &self.basis * (self.basis.transpose() * x)
    }

    /// `‖x − Px‖ / ‖x‖`, zero for the zero vector.
    pub fn relative_residual(&self, x: &DenseVector) -> f64 {
        let norm = x.norm();
        if norm == 0.0 {
            return 0.0;
        }
        (x - self.project(x)).norm() / norm
    }

    pub fn contains(&self, x: &DenseVector, tol: f64) -> bool {
        self.relative_residual(x) <= tol
    }

    pub fn contains_subspace(&self, other: &Subspace, tol: f64) -> bool {
        other
            .basis
            .column_iter()
            .all(|c| self.contains(&c.into_owned(), tol))
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        self.intersect_with_tol(other, INTERSECTION_TOL)
    }

    /// Orthonormal basis of `self ∩ other`: the directions `U a` whose
    /// distance `‖(I − P_other) U a‖` is at most `tol`.
    pub fn intersect_with_tol(&self, other: &Subspace, tol: f64) -> Subspace {
        let ambient = self.ambient();
        if self.is_zero() || other.is_zero() {
            return Self::zero(ambient);
        }
        let u = &self.basis;
        let g = u - &other.basis * (other.basis.transpose() * u);
        let svd = SVD::new(g, false, true);
        let vt = svd.v_t.expect("right singular vectors requested");
        let keep: Vec<DenseVector> = svd
            .singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| s <= tol)
            .map(|(i, _)| u * vt.row(i).transpose())
            .collect();
        Self::span_of(&keep, ambient)
    }

    /// `self + other`
    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut cols: Vec<DenseVector> = self.basis.column_iter().map(|c| c.into_owned()).collect();
        cols.extend(other.basis.column_iter().map(|c| c.into_owned()));
        Self::span_of(&cols, self.ambient())
    }

    /// Euclidean orthogonal complement in the ambient space.
    pub fn orthogonal_complement(&self) -> Subspace {
        let n = self.ambient();
        if self.is_zero() {
            return Self::full(n);
        }
        if self.dim() == n {
            return Self::zero(n);
        }
        let p = DenseMatrix::identity(n, n) - &self.basis * self.basis.transpose();
        let eig = sym_eig(&super::symmetrize(&p), 1e-8).expect("projector is symmetric");
        let keep: Vec<DenseVector> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > 0.5)
            .map(|(i, _)| eig.eigenvectors.column(i).into_owned())
            .collect();
        Self::span_of(&keep, n)
    }

    /// Orthogonal complement of `other` inside `self`.
    pub fn complement_of(&self, other: &Subspace) -> Subspace {
        self.intersect(&other.orthogonal_complement())
    }

    /// Principal angles in ascending order, `min(dim self, dim other)` of them.
    ///
    /// Each angle is `atan2(sin, cos)` with the cosines taken from
    /// `Uᵀ W` and the sines from the projection of the smaller space onto the
    /// complement of the larger, so small angles keep full accuracy.
    pub fn principal_angles(&self, other: &Subspace) -> Vec<f64> {
        let q = self.dim().min(other.dim());
        if q == 0 {
            return Vec::new();
        }
        let (big, small) = if self.dim() >= other.dim() {
            (self, other)
        } else {
            (other, self)
        };
        let cos = SVD::new(big.basis.transpose() * &small.basis, false, false).singular_values;
        let residual = &small.basis - &big.basis * (big.basis.transpose() * &small.basis);
        let sin = SVD::new(residual, false, false).singular_values;
        let mut cos: Vec<f64> = cos.iter().copied().collect();
        let mut sin: Vec<f64> = sin.iter().copied().collect();
        cos.sort_by(|a, b| b.total_cmp(a));
        sin.sort_by(|a, b| a.total_cmp(b));
        (0..q)
            .map(|i| sin[i].max(0.0).atan2(cos[i].clamp(0.0, 1.0)))
            .collect()
    }

    /// Largest principal angle, or `π/2` when the dimensions differ.
    pub fn distance(&self, other: &Subspace) -> f64 {
        if self.dim() != other.dim() {
            return std::f64::consts::FRAC_PI_2;
        }
        self.principal_angles(other)
            .last()
            .copied()
            .unwrap_or(0.0)
    }

    /// A random unit vector of the subspace.
    pub fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<DenseVector> {
        if self.is_zero() {
            return Err(Error::EmptySubspace);
        }
        let c = DenseVector::from_fn(self.dim(), |_, _| rng.sample(StandardNormal));
        let x = &self.basis * c;
        let norm = x.norm();
        Ok(x / norm)
    }
}

/// Orthonormal basis of the column span of `m`, dropping directions whose
/// singular value is at most `rank_tol` times the largest.
pub fn orthonormalize(m: &DenseMatrix, rank_tol: f64) -> DenseMatrix {
    let rows = m.nrows();
    if m.ncols() == 0 || rows == 0 {
        return DenseMatrix::zeros(rows, 0);
    }
    let svd = SVD::new(m.clone(), true, false);
    let u = svd.u.expect("left singular vectors requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    if !(smax > 0.0) {
        return DenseMatrix::zeros(rows, 0);
    }
    let keep: Vec<usize> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > rank_tol * smax)
        .map(|(i, _)| i)
        .collect();
    DenseMatrix::from_fn(rows, keep.len(), |r, c| u[(r, keep[c])])
}
