use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{pd_sqrt_invsqrt, symmetrize, DenseMatrix, DenseVector};
use crate::symplectic::{random_pd, symplectic_eigenvalues, Method, PdMode, PositiveDefiniteMatrix};

/// `A # B = A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2}`
pub fn geometric_mean(a: &PositiveDefiniteMatrix, b: &PositiveDefiniteMatrix) -> Result<PositiveDefiniteMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let (sqrt, inv_sqrt) = pd_sqrt_invsqrt(a.matrix())?;
    let inner = symmetrize(&(&inv_sqrt * b.matrix() * &inv_sqrt));
    let (inner_sqrt, _) = pd_sqrt_invsqrt(&inner)?;
    PositiveDefiniteMatrix::from_rounded(&sqrt * inner_sqrt * &sqrt)
}

/// `‖UᵀU − I‖_F` for `U = A^{-1/2} (A # B) B^{-1/2}`, which is orthogonal in
/// exact arithmetic.
pub fn polar_factor_check(a: &PositiveDefiniteMatrix, b: &PositiveDefiniteMatrix) -> Result<f64> {
    let g = geometric_mean(a, b)?;
    let (_, a_inv_sqrt) = pd_sqrt_invsqrt(a.matrix())?;
    let (_, b_inv_sqrt) = pd_sqrt_invsqrt(b.matrix())?;
    let u = a_inv_sqrt * g.matrix() * b_inv_sqrt;
    let dim = u.nrows();
    Ok((u.transpose() * &u - DenseMatrix::identity(dim, dim)).norm())
}

/// A pair for which `A^{1/2} B A^{1/2}` and `B^{1/2} A B^{1/2}` have different
/// symplectic spectra.
#[derive(Debug, Clone)]
pub struct HalfCongruencePair {
    pub a: PositiveDefiniteMatrix,
    pub b: PositiveDefiniteMatrix,
    pub d_ab: DenseVector,
    pub d_ba: DenseVector,
    /// Largest relative entrywise difference.
    pub gap: f64,
}

/// `(d(A^{1/2} B A^{1/2}), d(B^{1/2} A B^{1/2}))`
pub fn half_congruence_spectra(
    a: &PositiveDefiniteMatrix,
    b: &PositiveDefiniteMatrix,
) -> Result<(DenseVector, DenseVector)> {
    let (ra, _) = pd_sqrt_invsqrt(a.matrix())?;
    let (rb, _) = pd_sqrt_invsqrt(b.matrix())?;
    let ab = PositiveDefiniteMatrix::from_rounded(&ra * b.matrix() * &ra)?;
    let ba = PositiveDefiniteMatrix::from_rounded(&rb * a.matrix() * &rb)?;
    Ok((
        symplectic_eigenvalues(&ab, Method::Williamson)?,
        symplectic_eigenvalues(&ba, Method::Williamson)?,
    ))
}

/// Draws random Wishart pairs until the two half-congruences differ in
/// symplectic spectrum by more than `threshold` (relative).
pub fn search_half_congruence_counterexample<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    attempts: usize,
    threshold: f64,
) -> Result<Option<HalfCongruencePair>> {
    for _ in 0..attempts {
        let a = random_pd(rng, n, &PdMode::Wishart)?;
        let b = random_pd(rng, n, &PdMode::Wishart)?;
        let (d_ab, d_ba) = half_congruence_spectra(&a, &b)?;
        let gap = d_ab
            .iter()
            .zip(d_ba.iter())
            .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()))
            .fold(0.0, f64::max);
        if gap > threshold {
            return Ok(Some(HalfCongruencePair { a, b, d_ab, d_ba, gap }));
        }
    }
    Ok(None)
}
