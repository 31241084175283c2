use super::{ensure_finite, ensure_square, relative_asymmetry, symmetrize, DenseMatrix, DenseVector};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;

/// Eigendecomposition `S = Q Λ Qᵀ` of a real symmetric matrix with the
/// eigenvalues in ascending order and eigenvectors stored as columns of `Q`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: DenseVector,
    pub eigenvectors: DenseMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `Q f(Λ) Qᵀ`
    pub fn apply_function(&self, f: impl Fn(f64) -> f64) -> DenseMatrix {
        let q = &self.eigenvectors;
        let mut scaled = q.clone();
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let fl = f(lambda);
            scaled.column_mut(j).scale_mut(fl);
        }
        symmetrize(&(scaled * q.transpose()))
    }

    pub fn reconstruct(&self) -> DenseMatrix {
        self.apply_function(|x| x)
    }

    /// `‖Q Λ Qᵀ − S‖_F / ‖S‖_F`
    pub fn relative_residual(&self, s: &DenseMatrix) -> f64 {
        let norm = s.norm().max(f64::MIN_POSITIVE);
        (self.reconstruct() - s).norm() / norm
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m: f64, x| m.max(x.abs()))
    }
}

/// Symmetric eigendecomposition by the cyclic Jacobi method.
///
/// `tol` bounds the accepted relative asymmetry `‖S − Sᵀ‖_F / ‖S‖_F`; the
/// symmetric part of `S` is what gets diagonalized. Rotations are skipped
/// once an off-diagonal entry is negligible relative to the geometric mean of
/// the two diagonal entries it couples, which preserves relative accuracy of
/// small eigenvalues of positive definite inputs.
pub fn sym_eig(s: &DenseMatrix, tol: f64) -> Result<SpectralDecomposition> {
    let n = ensure_square(s)?;
    ensure_finite(s)?;
    let asymmetry = relative_asymmetry(s);
    if asymmetry > tol {
        return Err(Error::NotSymmetric { asymmetry });
    }
    let mut a = symmetrize(s);
    let mut v = DenseMatrix::identity(n, n);
    let eps = f64::EPSILON;

    let mut converged = n <= 1;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                if apq.abs() <= eps * 0.5 * (app.abs() * aqq.abs()).sqrt() {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                rotate(&mut a, &mut v, p, q, c, sn, t);
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        let off = off_diagonal_norm(&a);
        return Err(Error::NoConvergence {
            sweeps,
            off_norm: off,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let eigenvalues = DenseVector::from_iterator(n, order.iter().map(|&i| a[(i, i)]));
    let eigenvectors = DenseMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

// Applies the Jacobi rotation J(p, q, θ) as A ← JᵀAJ, V ← VJ.
fn rotate(a: &mut DenseMatrix, v: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64, t: f64) {
    let n = a.nrows();
    let apq = a[(p, q)];
    let tau = s / (1.0 + c);
    a[(p, p)] -= t * apq;
    a[(q, q)] += t * apq;
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for r in 0..n {
        if r != p && r != q {
            let arp = a[(r, p)];
            let arq = a[(r, q)];
            let new_p = arp - s * (arq + tau * arp);
            let new_q = arq + s * (arp - tau * arq);
            a[(r, p)] = new_p;
            a[(p, r)] = new_p;
            a[(r, q)] = new_q;
            a[(q, r)] = new_q;
        }
    }
    for r in 0..n {
        let vrp = v[(r, p)];
        let vrq = v[(r, q)];
        v[(r, p)] = vrp - s * (vrq + tau * vrp);
        v[(r, q)] = vrq + s * (vrp - tau * vrq);
    }
}

fn off_diagonal_norm(a: &DenseMatrix) -> f64 {
    let n = a.nrows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)] * a[(i, j)];
            }
        }
    }
    sum.sqrt()
}

/// Returns `(A^{1/2}, A^{-1/2})` for a symmetric positive definite `A`.
pub fn pd_sqrt_invsqrt(a: &DenseMatrix) -> Result<(DenseMatrix, DenseMatrix)> {
    let eig = sym_eig(a, 1e-10)?;
    let min = eig.min_eigenvalue();
    if !(min > 0.0) {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: min,
        });
    }
    Ok((eig.apply_function(f64::sqrt), eig.apply_function(|x| 1.0 / x.sqrt())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn identity_has_unit_spectrum() {
        let eig = sym_eig(&DenseMatrix::identity(3, 3), 1e-12).unwrap();
        assert_eq!(eig.eigenvalues.as_slice(), &[1.0, 1.0, 1.0]);
        assert!(super::super::orthogonality_defect(&eig.eigenvectors) < 1e-15);
    }

    #[test]
    fn two_by_two_constant_row_sums() {
        let s = DenseMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let eig = sym_eig(&s, 1e-12).unwrap();
        assert_relative_eq!(eig.eigenvalues[0], 1.0, epsilon = 1e-15);
        assert_relative_eq!(eig.eigenvalues[1], 3.0, epsilon = 1e-15);
        let u = eig.eigenvectors.column(0);
        let w = eig.eigenvectors.column(1);
        assert_relative_eq!(u[0], -u[1], epsilon = 1e-15);
        assert_relative_eq!(w[0], w[1], epsilon = 1e-15);
    }

    #[test]
    fn rejects_nonsymmetric_input() {
        let s = DenseMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(sym_eig(&s, 1e-12), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn rejects_nonsquare_and_nonfinite() {
        assert!(matches!(
            sym_eig(&DenseMatrix::zeros(2, 3), 1e-12),
            Err(Error::NotSquare { .. })
        ));
        let mut s = DenseMatrix::identity(2, 2);
        s[(0, 0)] = f64::NAN;
        assert!(matches!(sym_eig(&s, 1e-12), Err(Error::NonFinite)));
    }

    #[test]
    fn sqrt_of_identity_and_diagonal() {
        let (r, ri) = pd_sqrt_invsqrt(&DenseMatrix::identity(4, 4)).unwrap();
        assert_eq!(r, DenseMatrix::identity(4, 4));
        assert_eq!(ri, DenseMatrix::identity(4, 4));

        let a = DenseMatrix::from_diagonal(&DenseVector::from_vec(vec![4.0, 9.0]));
        let (r, ri) = pd_sqrt_invsqrt(&a).unwrap();
        assert_relative_eq!(r, DenseMatrix::from_diagonal(&DenseVector::from_vec(vec![2.0, 3.0])));
        assert_relative_eq!(
            ri,
            DenseMatrix::from_diagonal(&DenseVector::from_vec(vec![0.5, 1.0 / 3.0]))
        );
    }

    #[test]
    fn sqrt_reports_smallest_eigenvalue_of_indefinite_input() {
        let a = DenseMatrix::from_diagonal(&DenseVector::from_vec(vec![1.0, -2.0]));
        match pd_sqrt_invsqrt(&a) {
            Err(Error::NotPositiveDefinite { min_eigenvalue }) => {
                assert_relative_eq!(min_eigenvalue, -2.0)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_matrix_is_diagonal_already() {
        let eig = sym_eig(&DenseMatrix::zeros(3, 3), 1e-12).unwrap();
        assert!(eig.eigenvalues.iter().all(|&x| x == 0.0));
    }
}
