use super::{
    ensure_finite, ensure_square, relative_skew_defect, sym_eig, DenseMatrix, DenseVector,
};
use crate::error::{Error, Result};

/// Eigenvalues of `−K²` closer than this multiple of `‖K‖₂` are treated as
/// one cluster whose eigenspace is paired as a whole.
pub const CLUSTER_THRESHOLD: f64 = 1e-8;

/// Real canonical form `Qᵀ K Q = [[0, D], [−D, 0]]` of a nonsingular
/// skew-symmetric `K`, with `D = diag(block_angles)` ascending and `Q`
/// orthogonal.
#[derive(Debug, Clone)]
pub struct SkewCanonicalForm {
    pub block_angles: DenseVector,
    pub rotation: DenseMatrix,
}

impl SkewCanonicalForm {
    pub fn half_dim(&self) -> usize {
        self.block_angles.len()
    }

    /// The block matrix `[[0, D], [−D, 0]]`.
    pub fn canonical_matrix(&self) -> DenseMatrix {
        let n = self.half_dim();
        let mut c = DenseMatrix::zeros(2 * n, 2 * n);
        for (j, &d) in self.block_angles.iter().enumerate() {
            c[(j, n + j)] = d;
            c[(n + j, j)] = -d;
        }
        c
    }

    /// `‖Qᵀ K Q − [[0, D], [−D, 0]]‖_F / ‖K‖_F`
    pub fn relative_residual(&self, k: &DenseMatrix) -> f64 {
        let q = &self.rotation;
        let norm = k.norm().max(f64::MIN_POSITIVE);
        (q.transpose() * k * q - self.canonical_matrix()).norm() / norm
    }
}

/// Computes the real canonical form of a skew-symmetric matrix.
///
/// The eigenvectors of the symmetric matrix `−K² = KᵀK` are grouped by
/// cluster; inside each cluster a unit vector `u` is paired with
/// `−Ku / ‖Ku‖` to orient a 2×2 block. One refinement pass repeats the
/// procedure on the nearly canonical `QᵀKQ`, which recovers the accuracy
/// that squaring costs for the small block angles.
pub fn skew_canonical(k: &DenseMatrix, tol: f64) -> Result<SkewCanonicalForm> {
    let dim = ensure_square(k)?;
    ensure_finite(k)?;
    if dim % 2 != 0 {
        return Err(Error::OddDimension(dim));
    }
    let defect = relative_skew_defect(k);
    if defect > tol {
        return Err(Error::NotSkewSymmetric { asymmetry: defect });
    }
    let k = (k - k.transpose()) * 0.5;
    if dim == 0 {
        return Ok(SkewCanonicalForm {
            block_angles: DenseVector::zeros(0),
            rotation: DenseMatrix::zeros(0, 0),
        });
    }

    let first = pair_blocks(&k)?;
    let c = first.rotation.transpose() * &k * &first.rotation;
    let c = (&c - c.transpose()) * 0.5;
    let second = pair_blocks(&c)?;
    let form = SkewCanonicalForm {
        rotation: &first.rotation * &second.rotation,
        block_angles: second.block_angles,
    };

    let residual = form.relative_residual(&k);
    if residual > tol {
        return Err(Error::Residual {
            what: "skew canonical form",
            residual,
            bound: tol,
        });
    }
    Ok(form)
}

fn pair_blocks(k: &DenseMatrix) -> Result<SkewCanonicalForm> {
    let dim = k.nrows();
    let n = dim / 2;
    let gram = k.transpose() * k;
    let eig = sym_eig(&super::symmetrize(&gram), 1e-8)?;
    let omegas: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let omega_max = omegas[dim - 1];
    let omega_min = omegas[0];
    if omega_max == 0.0 || omega_min <= 4.0 * dim as f64 * f64::EPSILON * omega_max {
        return Err(Error::SingularSkew {
            smallest: omega_min,
        });
    }

    let threshold = CLUSTER_THRESHOLD * omega_max;
    let mut clusters: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=dim {
        if i == dim || omegas[i] - omegas[i - 1] > threshold {
            clusters.push((start, i));
            start = i;
        }
    }

    let mut blocks: Vec<(f64, DenseVector, DenseVector)> = Vec::with_capacity(n);
    for (ci, &(lo, hi)) in clusters.iter().enumerate() {
        let size = hi - lo;
        let gap = cluster_gap(&omegas, &clusters, ci);
        if size % 2 != 0 {
            return Err(Error::ClusterFailure { size, gap });
        }
        let mut chosen: Vec<DenseVector> = Vec::with_capacity(size);
        for _ in 0..size / 2 {
            // Take the cluster vector least represented by what is already chosen.
            let mut best: Option<DenseVector> = None;
            let mut best_norm = 0.0;
            for col in lo..hi {
                let mut u = eig.eigenvectors.column(col).into_owned();
                orthogonalize(&mut u, &chosen);
                let norm = u.norm();
                if norm > best_norm {
                    best_norm = norm;
                    best = Some(u);
                }
            }
            let mut u = match best {
                Some(u) if best_norm > 0.1 => u,
                _ => return Err(Error::ClusterFailure { size, gap }),
            };
            u /= best_norm;
            chosen.push(u.clone());
            let mut w = -(k * &u);
            orthogonalize(&mut w, &chosen);
            let wn = w.norm();
            if !(wn > 0.0) {
                return Err(Error::ClusterFailure { size, gap });
            }
            w /= wn;
            chosen.push(w.clone());
            let angle = u.dot(&(k * &w));
            blocks.push((angle, u, w));
        }
    }
    blocks.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut rotation = DenseMatrix::zeros(dim, dim);
    for (j, (_, u, w)) in blocks.iter().enumerate() {
        rotation.set_column(j, u);
        rotation.set_column(n + j, w);
    }
    let block_angles = DenseVector::from_iterator(n, blocks.iter().map(|b| b.0));
    Ok(SkewCanonicalForm {
        block_angles,
        rotation,
    })
}

fn orthogonalize(v: &mut DenseVector, against: &[DenseVector]) {
    for _ in 0..2 {
        for c in against {
            let proj = c.dot(v);
            v.axpy(-proj, c, 1.0);
        }
    }
}

fn cluster_gap(omegas: &[f64], clusters: &[(usize, usize)], ci: usize) -> f64 {
    let (lo, hi) = clusters[ci];
    let mut gap = f64::INFINITY;
    if lo > 0 {
        gap = gap.min(omegas[lo] - omegas[lo - 1]);
    }
    if hi < omegas.len() {
        gap = gap.min(omegas[hi] - omegas[hi - 1]);
    }
    gap
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::orthogonality_defect;
    use approx::assert_relative_eq;

    fn standard_j(n: usize) -> DenseMatrix {
        let mut j = DenseMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            j[(i, n + i)] = 1.0;
            j[(n + i, i)] = -1.0;
        }
        j
    }

    #[test]
    fn j_is_already_canonical() {
        let form = skew_canonical(&standard_j(2), 1e-12).unwrap();
        assert_eq!(form.block_angles.as_slice(), &[1.0, 1.0]);
        assert!(form.relative_residual(&standard_j(2)) < 1e-15);
        assert!(orthogonality_defect(&form.rotation) < 1e-14);
    }

    #[test]
    fn two_by_two_block() {
        let k = DenseMatrix::from_row_slice(2, 2, &[0.0, 5.0, -5.0, 0.0]);
        let form = skew_canonical(&k, 1e-12).unwrap();
        assert_relative_eq!(form.block_angles[0], 5.0, epsilon = 1e-14);
        assert_relative_eq!(form.rotation, DenseMatrix::identity(2, 2), epsilon = 1e-14);
    }

    #[test]
    fn rejects_singular_and_odd_inputs() {
        let k = DenseMatrix::zeros(4, 4);
        assert!(matches!(skew_canonical(&k, 1e-12), Err(Error::SingularSkew { .. })));
        assert!(matches!(
            skew_canonical(&DenseMatrix::zeros(3, 3), 1e-12),
            Err(Error::OddDimension(3))
        ));
        let mut k = standard_j(1);
        k[(0, 1)] = 2.0;
        assert!(matches!(
            skew_canonical(&k, 1e-12),
            Err(Error::NotSkewSymmetric { .. })
        ));
    }
}
