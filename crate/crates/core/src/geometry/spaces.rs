use super::basis::{prime_coordinates, SymplecticBasis};
use crate::error::{Error, Result};
use crate::linalg::{DenseVector, Subspace};
use crate::symplectic::SymplecticForm;

/// Relative projection residual below which `x ∈ W` is accepted.
pub const MEMBERSHIP_TOL: f64 = 1e-8;

/// Largest `|⟨x, Jy⟩|` over orthonormal `x, y ∈ W` for `W` to count as isotropic.
pub const ISOTROPY_TOL: f64 = 1e-10;

/// Smallest singular value of `Pᵀ J P` (orthonormal `P`) for a subspace to
/// count as symplectic.
pub const NONDEGENERACY_TOL: f64 = 1e-8;

/// `W′` and `W♯ = W ∩ W′` for `W ⊆ span(B)`.
#[derive(Debug, Clone)]
pub struct PrimeSharp {
    pub prime: Subspace,
    pub sharp: Subspace,
}

pub fn subspace_prime_sharp(w: &Subspace, basis: &SymplecticBasis) -> Result<PrimeSharp> {
    let coords = basis.subspace_to_coordinates(w)?;
    let prime = basis.subspace_from_coordinates(&prime_subspace(&coords));
    let sharp = basis.subspace_from_coordinates(&sharp_subspace(&coords)?);
    Ok(PrimeSharp { prime, sharp })
}

/// `{Px : x ∈ S}` for a subspace of B-coordinates.
pub(crate) fn prime_subspace(s: &Subspace) -> Subspace {
    let cols: Vec<DenseVector> = s
        .basis()
        .column_iter()
        .map(|c| prime_coordinates(&c.into_owned()))
        .collect();
    Subspace::span_of(&cols, s.ambient())
}

/// `S ∩ S′` in B-coordinates; prime-invariant, hence of even dimension.
pub(crate) fn sharp_subspace(s: &Subspace) -> Result<Subspace> {
    let sharp = s.intersect(&prime_subspace(s));
    if sharp.dim() % 2 == 1 {
        return Err(Error::SharpParity(sharp.dim()));
    }
    Ok(sharp)
}

/// `span{x, x′ : x ∈ xs}` in B-coordinates.
pub(crate) fn prime_closed_span(xs: &[DenseVector], ambient: usize) -> Subspace {
    let mut cols = Vec::with_capacity(2 * xs.len());
    for x in xs {
        cols.push(x.clone());
        cols.push(prime_coordinates(x));
    }
    Subspace::span_of(&cols, ambient)
}

/// `S^{⊥s} = {y ∈ ambient : ⟨x, Jy⟩ = 0 for all x ∈ S}`.
pub fn symplectic_complement(s: &Subspace, ambient: &Subspace) -> Result<Subspace> {
    let form = SymplecticForm::for_dim(ambient.ambient())?;
    if s.ambient() != ambient.ambient() {
        return Err(Error::DimensionMismatch {
            expected: ambient.ambient(),
            found: s.ambient(),
        });
    }
    let p = ambient.basis();
    let jp = form.apply_matrix(p);
    let restricted = p.transpose() * &jp;
    let singular = restricted.singular_values();
    if p.ncols() % 2 == 1 || singular.iter().any(|&x| x <= NONDEGENERACY_TOL) {
        return Err(Error::NotSymplecticSubspace);
    }
    if !ambient.contains_subspace(s, MEMBERSHIP_TOL) {
        return Err(Error::OutsideSpan {
            residual: (0..s.dim())
                .map(|i| ambient.relative_residual(&s.basis().column(i).into_owned()))
                .fold(0.0, f64::max),
        });
    }
    // Coefficients a with (Sᵀ J P) a = 0.
    let constraints = s.basis().transpose() * jp;
    let null = Subspace::span(&constraints.transpose()).orthogonal_complement();
    Ok(Subspace::span(&(p * null.basis())))
}

/// Every pair of vectors of `W` is skew-orthogonal. Subspaces of
/// odd-dimensional spaces are never isotropic.
pub fn is_isotropic(w: &Subspace) -> bool {
    let Ok(form) = SymplecticForm::for_dim(w.ambient()) else {
        return false;
    };
    let b = w.basis();
    (b.transpose() * form.apply_matrix(b)).iter().all(|x| x.abs() <= ISOTROPY_TOL)
}
