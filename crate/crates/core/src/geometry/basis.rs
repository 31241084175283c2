use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, DenseVector, Subspace};
use crate::symplectic::{SymplecticForm, SymplecticTupleSet, WilliamsonDecomposition};

/// Relative residual allowed when a vector is expected to lie in `span(B)`.
pub const SPAN_TOL: f64 = 1e-9;

/// Accepted deviation from symplectic orthonormality when building a basis.
pub const BASIS_TOL: f64 = 1e-8;

/// A symplectic basis `{u_1..u_m, v_1..v_m}` of a `2m`-dimensional symplectic
/// subspace of `R^{2N}`, stored column-wise as `(u_1..u_m, v_1..v_m)`.
///
/// Every vector `x` of the span has B-coordinates `(α, β)` with
/// `x = Σ α_i u_i + β_i v_i`. Because `Cᵀ J C = J_m`, they are recovered
/// exactly as `(α, β) = −J_m Cᵀ J x`.
#[derive(Debug, Clone)]
pub struct SymplecticBasis {
    columns: DenseMatrix,
    ambient_form: SymplecticForm,
    coordinate_form: SymplecticForm,
}

impl SymplecticBasis {
    pub fn new(columns: DenseMatrix) -> Result<Self> {
        let tuple = SymplecticTupleSet::from_columns(&columns)?;
        tuple.validate(BASIS_TOL)?;
        let ambient_form = SymplecticForm::for_dim(columns.nrows())?;
        let coordinate_form = SymplecticForm::new(columns.ncols() / 2);
        Ok(Self {
            columns,
            ambient_form,
            coordinate_form,
        })
    }

    pub fn standard(n: usize) -> Self {
        Self::new(DenseMatrix::identity(2 * n, 2 * n)).expect("standard basis is symplectic")
    }

    pub fn from_tuple(tuple: &SymplecticTupleSet) -> Result<Self> {
        Self::new(tuple.matrix())
    }

    /// The columns of the Williamson matrix `M`: a symplectic eigenbasis.
    pub fn from_williamson(w: &WilliamsonDecomposition) -> Result<Self> {
        Self::new(w.m.clone())
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.columns
    }

    /// `m`, the number of pairs.
    pub fn half_dim(&self) -> usize {
        self.coordinate_form.half_dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.columns.nrows()
    }

    /// `u_i`, zero-based.
    pub fn u(&self, i: usize) -> DenseVector {
        self.columns.column(i).into_owned()
    }

    /// `v_i`, zero-based.
    pub fn v(&self, i: usize) -> DenseVector {
        self.columns.column(self.half_dim() + i).into_owned()
    }

    pub fn span(&self) -> Subspace {
        Subspace::span(&self.columns)
    }

    fn raw_coordinates(&self, x: &DenseVector) -> DenseVector {
        let jx = self.ambient_form.apply(x);
        let ctjx = self.columns.transpose() * jx;
        -self.coordinate_form.apply(&ctjx)
    }

    /// B-coordinates `(α, β)` of a vector of `span(B)`.
    pub fn coordinates(&self, x: &DenseVector) -> Result<DenseVector> {
        if x.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                found: x.len(),
            });
        }
        let c = self.raw_coordinates(x);
        let norm = x.norm();
        if norm > 0.0 {
            let residual = (x - &self.columns * &c).norm() / norm;
            if residual > SPAN_TOL {
                return Err(Error::OutsideSpan { residual });
            }
        }
        Ok(c)
    }

    pub fn from_coordinates(&self, c: &DenseVector) -> DenseVector {
        &self.columns * c
    }

    /// The B-complement `x′ = Σ (−β_i u_i + α_i v_i)`.
    pub fn prime(&self, x: &DenseVector) -> Result<DenseVector> {
        let c = self.coordinates(x)?;
        Ok(self.from_coordinates(&prime_coordinates(&c)))
    }

    /// `⟨x, y⟩_B = Σ (α_i γ_i + β_i δ_i)`
    pub fn b_inner(&self, x: &DenseVector, y: &DenseVector) -> Result<f64> {
        Ok(self.coordinates(x)?.dot(&self.coordinates(y)?))
    }

    pub fn b_norm(&self, x: &DenseVector) -> Result<f64> {
        Ok(self.coordinates(x)?.norm())
    }

    /// Image of an ambient subspace of `span(B)` in B-coordinates.
    pub fn subspace_to_coordinates(&self, s: &Subspace) -> Result<Subspace> {
        let cols = s
            .basis()
            .column_iter()
            .map(|c| self.coordinates(&c.into_owned()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace::span_of(&cols, 2 * self.half_dim()))
    }

    /// Ambient subspace spanned by `B`-combinations given in coordinates.
    pub fn subspace_from_coordinates(&self, s: &Subspace) -> Subspace {
        Subspace::span(&(&self.columns * s.basis()))
    }
}

/// `(α, β) ↦ (−β, α)`, the B-complement in coordinates.
pub(crate) fn prime_coordinates(c: &DenseVector) -> DenseVector {
    let m = c.len() / 2;
    DenseVector::from_fn(2 * m, |i, _| if i < m { -c[m + i] } else { c[i - m] })
}

/// The operator `D̃ u_i = d_i u_i`, `D̃ v_i = d_i v_i` attached to a symplectic
/// basis. On a symplectic eigenbasis of `A`, `⟨x, D̃x⟩_B = ⟨x, Ax⟩`.
#[derive(Debug, Clone)]
pub struct BDiagonalOperator {
    pub basis: SymplecticBasis,
    pub d: DenseVector,
}

impl BDiagonalOperator {
    pub fn new(basis: SymplecticBasis, d: DenseVector) -> Result<Self> {
        if d.len() != basis.half_dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.half_dim(),
                found: d.len(),
            });
        }
        Ok(Self { basis, d })
    }

    pub fn from_williamson(w: &WilliamsonDecomposition) -> Result<Self> {
        Self::new(SymplecticBasis::from_williamson(w)?, w.d.clone())
    }

    pub fn apply(&self, x: &DenseVector) -> Result<DenseVector> {
        let c = self.basis.coordinates(x)?;
        let m = self.d.len();
        let scaled = DenseVector::from_fn(2 * m, |i, _| c[i] * self.d[i % m]);
        Ok(self.basis.from_coordinates(&scaled))
    }

    /// `⟨x, D̃x⟩_B = Σ d_i (α_i² + β_i²)`
    pub fn b_quadratic(&self, x: &DenseVector) -> Result<f64> {
        let c = self.basis.coordinates(x)?;
        let m = self.d.len();
        Ok((0..2 * m).map(|i| self.d[i % m] * c[i] * c[i]).sum())
    }
}
