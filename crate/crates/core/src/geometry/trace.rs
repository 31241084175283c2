use super::basis::BDiagonalOperator;
use super::construct::{orthosymplectic_deviation, CONSTRUCTION_TOL};
use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, DenseVector, Subspace};

/// Both sides of the trace equality, evaluated directly with `A` and through
/// `⟨x, D̃x⟩_B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub lhs_operator: f64,
    pub rhs_operator: f64,
}

impl TraceCheck {
    pub fn relative_gap(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.lhs.abs().max(f64::MIN_POSITIVE)
    }
}

/// `Σ ⟨x_j, A x_j⟩ + ⟨x_j′, A x_j′⟩` against the same sum over `v_j`, for two
/// B-orthonormal skew-orthogonal sets whose prime-closed spans agree.
/// `op` must carry a symplectic eigenbasis of `A` with its `d`.
pub fn same_span_trace_check(
    a: &DenseMatrix,
    xs: &[DenseVector],
    vs: &[DenseVector],
    op: &BDiagonalOperator,
) -> Result<TraceCheck> {
    let basis = &op.basis;
    if a.nrows() != basis.ambient_dim() || a.ncols() != basis.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.ambient_dim(),
            found: a.nrows(),
        });
    }
    let xc: Vec<DenseVector> = xs.iter().map(|x| basis.coordinates(x)).collect::<Result<_>>()?;
    let vc: Vec<DenseVector> = vs.iter().map(|x| basis.coordinates(x)).collect::<Result<_>>()?;
    for set in [&xc, &vc] {
        let deviation = orthosymplectic_deviation(set);
        if deviation > CONSTRUCTION_TOL {
            return Err(Error::NotSymplecticallyOrthonormal { deviation });
        }
    }
    let pairs = |set: &[DenseVector]| -> Result<Vec<DenseVector>> {
        let mut out = Vec::with_capacity(2 * set.len());
        for x in set {
            out.push(x.clone());
            out.push(basis.prime(x)?);
        }
        Ok(out)
    };
    let xp = pairs(xs)?;
    let vp = pairs(vs)?;
    let angle = Subspace::span_of(&xp, a.nrows()).distance(&Subspace::span_of(&vp, a.nrows()));
    if angle > CONSTRUCTION_TOL {
        return Err(Error::Residual {
            what: "span equality",
            residual: angle,
            bound: CONSTRUCTION_TOL,
        });
    }
    let direct = |set: &[DenseVector]| set.iter().map(|x| x.dot(&(a * x))).sum::<f64>();
    let operator = |set: &[DenseVector]| -> Result<f64> {
        set.iter().map(|x| op.b_quadratic(x)).sum()
    };
    Ok(TraceCheck {
        lhs: direct(&xp),
        rhs: direct(&vp),
        lhs_operator: operator(&xp)?,
        rhs_operator: operator(&vp)?,
    })
}
