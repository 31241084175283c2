use rand::Rng;

use crate::error::{Error, Result};

/// Relative tolerance on total sums in [`majorize`].
pub const TOTAL_SUM_TOL: f64 = 1e-12;

/// A real vector together with its ascending rearrangement `α↑`.
#[derive(Debug, Clone, PartialEq)]
pub struct MajorizationVector {
    values: Vec<f64>,
    ascending: Vec<f64>,
}

impl MajorizationVector {
    pub fn new(values: Vec<f64>) -> Self {
        let mut ascending = values.clone();
        ascending.sort_by(f64::total_cmp);
        Self { values, ascending }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn ascending(&self) -> &[f64] {
        &self.ascending
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `Σ_{j ≤ k} α↑_j` for `k = 1..n`.
    pub fn partial_sums(&self) -> Vec<f64> {
        self.ascending
            .iter()
            .scan(0.0, |acc, x| {
                *acc += x;
                Some(*acc)
            })
            .collect()
    }

    pub fn total(&self) -> f64 {
        self.partial_sums().last().copied().unwrap_or(0.0)
    }
}

impl From<Vec<f64>> for MajorizationVector {
    fn from(v: Vec<f64>) -> Self {
        Self::new(v)
    }
}

impl From<&[f64]> for MajorizationVector {
    fn from(v: &[f64]) -> Self {
        Self::new(v.to_vec())
    }
}

fn same_length(alpha: &MajorizationVector, beta: &MajorizationVector) -> Result<()> {
    if alpha.len() != beta.len() {
        return Err(Error::DimensionMismatch {
            expected: alpha.len(),
            found: beta.len(),
        });
    }
    Ok(())
}

/// Smallest `Σ_{j≤k} α↑_j − Σ_{j≤k} β↑_j` over `k`; nonnegative exactly when
/// `α ≺^w β`.
pub fn supermajorization_margin(alpha: &MajorizationVector, beta: &MajorizationVector) -> Result<f64> {
    same_length(alpha, beta)?;
    Ok(alpha
        .partial_sums()
        .iter()
        .zip(beta.partial_sums())
        .map(|(a, b)| a - b)
        .fold(f64::INFINITY, f64::min))
}

/// `α ≺^w β`: every ascending partial sum of `α` is at least that of `β`.
pub fn supermajorize(alpha: &MajorizationVector, beta: &MajorizationVector) -> Result<bool> {
    same_length(alpha, beta)?;
    Ok(alpha
        .partial_sums()
        .iter()
        .zip(beta.partial_sums())
        .all(|(a, b)| *a >= b))
}

/// `α ≺^w β` up to `tol · max(1, |Σ_{j≤k} β↑_j|)` per partial sum.
pub fn supermajorize_within(alpha: &MajorizationVector, beta: &MajorizationVector, tol: f64) -> Result<bool> {
    same_length(alpha, beta)?;
    Ok(alpha
        .partial_sums()
        .iter()
        .zip(beta.partial_sums())
        .all(|(a, b)| *a >= b - tol * b.abs().max(1.0)))
}

/// `α ≺ β`: supermajorization with equal totals.
pub fn majorize(alpha: &MajorizationVector, beta: &MajorizationVector) -> Result<bool> {
    if !supermajorize(alpha, beta)? {
        return Ok(false);
    }
    let (a, b) = (alpha.total(), beta.total());
    Ok((a - b).abs() <= TOTAL_SUM_TOL * a.abs().max(b.abs()).max(1.0))
}

/// `α↑_i ≤ β↑_i` for all `i`.
pub fn weakly_below(alpha: &MajorizationVector, beta: &MajorizationVector) -> Result<bool> {
    same_length(alpha, beta)?;
    Ok(alpha
        .ascending()
        .iter()
        .zip(beta.ascending())
        .all(|(a, b)| a <= b))
}

/// A positive vector with entries log-uniform on `[0.1, 10]`.
pub fn random_positive<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<f64> {
    (0..k)
        .map(|_| (10f64.ln() * (2.0 * rng.random::<f64>() - 1.0)).exp())
        .collect()
}

/// `(α, β)` with `α ≺ β`, built from `β` by Robin Hood transfers: mass moves
/// from a larger entry to a smaller one without reversing their order.
pub fn random_majorization_pair<R: Rng + ?Sized>(rng: &mut R, k: usize) -> (Vec<f64>, Vec<f64>) {
    let beta = random_positive(rng, k);
    let mut alpha = beta.clone();
    if k >= 2 {
        for _ in 0..rng.random_range(1..=2 * k) {
            let i = rng.random_range(0..k);
            let j = rng.random_range(0..k);
            let (lo, hi) = if alpha[i] <= alpha[j] { (i, j) } else { (j, i) };
            let t = 0.5 * (alpha[hi] - alpha[lo]) * rng.random::<f64>();
            alpha[hi] -= t;
            alpha[lo] += t;
        }
    }
    (alpha, beta)
}

/// `(α, β)` with `α ≺^w β`: a majorization pair with `α` then raised.
pub fn random_supermajorization_pair<R: Rng + ?Sized>(rng: &mut R, k: usize) -> (Vec<f64>, Vec<f64>) {
    let (mut alpha, beta) = random_majorization_pair(rng, k);
    for a in &mut alpha {
        if rng.random::<bool>() {
            *a += rng.random::<f64>();
        }
    }
    (alpha, beta)
}

/// `(α, β)` with `α ≤ β` entrywise (hence also after sorting).
pub fn random_dominated_pair<R: Rng + ?Sized>(rng: &mut R, k: usize) -> (Vec<f64>, Vec<f64>) {
    let alpha = random_positive(rng, k);
    let beta = alpha.iter().map(|a| a + rng.random::<f64>()).collect();
    (alpha, beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mv(v: &[f64]) -> MajorizationVector {
        MajorizationVector::from(v)
    }

    #[test]
    fn partial_sum_examples() {
        assert!(supermajorize(&mv(&[2., 3.]), &mv(&[2., 3.])).unwrap());
        assert!(!supermajorize(&mv(&[2., 3.]), &mv(&[1., 5.])).unwrap());
        assert!(supermajorize(&mv(&[2., 3.]), &mv(&[1., 3.])).unwrap());
        assert!(majorize(&mv(&[2., 2.]), &mv(&[1., 3.])).unwrap());
        assert!(!majorize(&mv(&[1., 3.]), &mv(&[2., 2.])).unwrap());
        assert!(majorize(&mv(&[3., 1., 2.]), &mv(&[2., 3., 1.])).unwrap());
        assert!(majorize(&mv(&[2., 3., 1.]), &mv(&[3., 1., 2.])).unwrap());
    }

    #[test]
    fn length_mismatch() {
        assert!(supermajorize(&mv(&[1.]), &mv(&[1., 2.])).is_err());
    }

    #[test]
    fn margin_sign() {
        assert_eq!(supermajorization_margin(&mv(&[2., 3.]), &mv(&[1., 5.])).unwrap(), -1.0);
        assert_eq!(supermajorization_margin(&mv(&[2., 3.]), &mv(&[1., 3.])).unwrap(), 1.0);
    }
}
