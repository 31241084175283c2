use std::fmt;
use std::str::FromStr;

use nalgebra::Schur;
use serde::{Deserialize, Serialize};

use super::{williamson, PositiveDefiniteMatrix, SymplecticForm};
use crate::error::{Error, Result};
use crate::linalg::{pd_sqrt_invsqrt, skew_canonical, DenseVector};

/// Route used to compute symplectic eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Block angles of the skew-symmetric `A^{1/2} J A^{1/2}`.
    SkewCanonical,
    /// Positive imaginary parts of the eigenvalues of `J A` (general eigensolver).
    JaEigen,
    /// The diagonal of the Williamson normal form.
    Williamson,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::SkewCanonical, Method::JaEigen, Method::Williamson];
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::SkewCanonical => "skew-canonical",
            Method::JaEigen => "ja-eigen",
            Method::Williamson => "williamson",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "skew-canonical" => Ok(Method::SkewCanonical),
            "ja-eigen" | "JA-eigen" => Ok(Method::JaEigen),
            "williamson" => Ok(Method::Williamson),
            other => Err(Error::InvalidArgument(format!("unknown method `{other}`"))),
        }
    }
}

/// Symplectic eigenvalues `d_1 ≤ … ≤ d_n` of `A`.
pub fn symplectic_eigenvalues(a: &PositiveDefiniteMatrix, method: Method) -> Result<DenseVector> {
    match method {
        Method::SkewCanonical => {
            let form = SymplecticForm::new(a.half_dim());
            let (sqrt, _) = pd_sqrt_invsqrt(a.matrix())?;
            let k = &sqrt * form.apply_matrix(&sqrt);
            let k = (&k - k.transpose()) * 0.5;
            Ok(skew_canonical(&k, 1e-10)?.block_angles)
        }
        Method::JaEigen => ja_eigen(a),
        Method::Williamson => Ok(williamson(a)?.d),
    }
}

fn ja_eigen(a: &PositiveDefiniteMatrix) -> Result<DenseVector> {
    let n = a.half_dim();
    let ja = SymplecticForm::new(n).apply_matrix(a.matrix());
    let schur = Schur::try_new(ja, f64::EPSILON, 100_000).ok_or(Error::SchurFailure)?;
    let mut imag: Vec<f64> = schur.complex_eigenvalues().iter().map(|z| z.im).collect();
    imag.sort_by(|x, y| y.total_cmp(x));
    let mut d: Vec<f64> = imag[..n].to_vec();
    d.reverse();
    Ok(DenseVector::from_vec(d))
}
