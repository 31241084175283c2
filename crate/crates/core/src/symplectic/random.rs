use rand::Rng;
use rand_distr::StandardNormal;

use super::{PositiveDefiniteMatrix, SymplecticForm};
use crate::error::{Error, Result};
use crate::linalg::{sym_eig, DenseMatrix, DenseVector};

/// Largest spectral norm of the symmetric generator in [`random_symplectic`].
pub const MAX_GENERATOR_NORM: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub enum PdMode {
    /// `R Rᵀ + 10⁻³ · tr(R Rᵀ)/(2n) · I` with `R` standard Gaussian.
    Wishart,
    /// `Sᵀ diag(D, D) S` with `S` random symplectic.
    PrescribedSpectrum(Vec<f64>),
}

pub fn random_symmetric<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DenseMatrix {
    let g = DenseMatrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    (&g + g.transpose()) * 0.5
}

/// `exp(J H)`, symplectic for every symmetric `H`.
pub fn symplectic_exp(h: &DenseMatrix) -> Result<DenseMatrix> {
    let form = SymplecticForm::for_dim(h.nrows())?;
    if h.iter().all(|&x| x == 0.0) {
        return Ok(DenseMatrix::identity(h.nrows(), h.nrows()));
    }
    Ok(form.apply_matrix(h).exp())
}

/// `exp(J H)` with `H` random symmetric, rescaled so that `‖H‖₂` is uniform
/// on `(0, 2]`.
pub fn random_symplectic<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DenseMatrix {
    let h = random_symmetric(rng, 2 * n);
    let norm = sym_eig(&h, 1e-12)
        .expect("symmetrized Gaussian matrix")
        .max_abs_eigenvalue();
    let target = MAX_GENERATOR_NORM * (1.0 - rng.random::<f64>());
    let h = if norm > 0.0 { h * (target / norm) } else { h };
    symplectic_exp(&h).expect("even dimension")
}

/// Ascending vector of `n` values drawn log-uniformly from `[lo, hi]`.
pub fn random_spectrum<R: Rng + ?Sized>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    let mut d: Vec<f64> = (0..n).map(|_| (a + (b - a) * rng.random::<f64>()).exp()).collect();
    d.sort_by(f64::total_cmp);
    d
}

pub fn random_pd<R: Rng + ?Sized>(rng: &mut R, n: usize, mode: &PdMode) -> Result<PositiveDefiniteMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("half dimension must be at least 1".into()));
    }
    match mode {
        PdMode::Wishart => {
            let r = DenseMatrix::from_fn(2 * n, 2 * n, |_, _| rng.sample::<f64, _>(StandardNormal));
            let rrt = &r * r.transpose();
            let shift = 1e-3 * rrt.trace() / (2 * n) as f64;
            PositiveDefiniteMatrix::from_rounded(rrt + DenseMatrix::identity(2 * n, 2 * n) * shift)
        }
        PdMode::PrescribedSpectrum(d) => {
            if d.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: d.len(),
                });
            }
            if !d.iter().all(|&x| x > 0.0 && x.is_finite()) {
                return Err(Error::InvalidArgument("prescribed spectrum must be positive".into()));
            }
            let s = random_symplectic(rng, n);
            let diag = DenseVector::from_fn(2 * n, |i, _| d[i % n]);
            let normal = DenseMatrix::from_diagonal(&diag);
            PositiveDefiniteMatrix::from_rounded(s.transpose() * normal * s)
        }
    }
}
