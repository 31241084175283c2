use super::basis::SymplecticBasis;
use crate::error::{Error, Result};
use crate::linalg::{DenseVector, RANK_TOL};
use crate::symplectic::symplectic_inner;

/// Allowed relative `|⟨x, Jc⟩|` between an input and a skew constraint.
pub const SKEW_TOL: f64 = 1e-9;

/// Modified Gram–Schmidt in the B-inner product, two passes per vector.
///
/// With `skew_constraint`, every input must be skew-orthogonal to every
/// constraint vector; the outputs are then checked to still be.
pub fn b_gram_schmidt(
    vectors: &[DenseVector],
    basis: &SymplecticBasis,
    skew_constraint: Option<&[DenseVector]>,
) -> Result<Vec<DenseVector>> {
    let constraint = skew_constraint.unwrap_or(&[]);
    for x in vectors {
        check_skew(x, constraint)?;
    }
    let mut out: Vec<DenseVector> = Vec::with_capacity(vectors.len());
    let mut coords: Vec<DenseVector> = Vec::with_capacity(vectors.len());
    for x in vectors {
        let mut c = basis.coordinates(x)?;
        let original = c.norm();
        for _ in 0..2 {
            for q in &coords {
                let p = q.dot(&c);
                c.axpy(-p, q, 1.0);
            }
        }
        let norm = c.norm();
        if original == 0.0 || norm <= RANK_TOL * original {
            return Err(Error::RankDeficient {
                residual: if original == 0.0 { 0.0 } else { norm / original },
            });
        }
        c /= norm;
        out.push(basis.from_coordinates(&c));
        coords.push(c);
    }
    for x in &out {
        check_skew(x, constraint)?;
    }
    Ok(out)
}

fn check_skew(x: &DenseVector, constraint: &[DenseVector]) -> Result<()> {
    for c in constraint {
        let scale = (x.norm() * c.norm()).max(f64::MIN_POSITIVE);
        let deviation = symplectic_inner(x, c)?.abs() / scale;
        if deviation > SKEW_TOL {
            return Err(Error::SkewConstraint { deviation });
        }
    }
    Ok(())
}
