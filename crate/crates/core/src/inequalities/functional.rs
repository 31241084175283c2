use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::majorization::{random_dominated_pair, random_majorization_pair, random_positive, random_supermajorization_pair};
use crate::error::{Error, Result};

/// Permutation-invariant functionals on positive `k`-vectors that are meant
/// to be Schur-concave and increasing. These properties are checked
/// empirically by [`schur_concave_monotone_check`], not assumed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum SpectralFunctional {
    Sum,
    Product,
    Min,
    /// Elementary symmetric polynomial `e_r`.
    Elementary(usize),
}

impl SpectralFunctional {
    /// The functionals run by default.
    pub const SHIPPED: [SpectralFunctional; 4] = [
        SpectralFunctional::Sum,
        SpectralFunctional::Product,
        SpectralFunctional::Min,
        SpectralFunctional::Elementary(2),
    ];

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        match self {
            SpectralFunctional::Sum => x.iter().sum(),
            SpectralFunctional::Product => x.iter().product(),
            SpectralFunctional::Min => x.iter().copied().fold(f64::INFINITY, f64::min),
            SpectralFunctional::Elementary(r) => {
                let mut e = vec![0.0; x.len() + 1];
                e[0] = 1.0;
                for (i, &v) in x.iter().enumerate() {
                    for j in (1..=i + 1).rev() {
                        e[j] += v * e[j - 1];
                    }
                }
                e.get(*r).copied().unwrap_or(0.0)
            }
        }
    }

    /// Whether the functional is defined and non-constant on `k`-vectors.
    pub fn applies_to(&self, k: usize) -> bool {
        match self {
            SpectralFunctional::Elementary(r) => (1..=k).contains(r),
            _ => k >= 1,
        }
    }
}

impl fmt::Display for SpectralFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralFunctional::Sum => f.write_str("sum"),
            SpectralFunctional::Product => f.write_str("product"),
            SpectralFunctional::Min => f.write_str("min"),
            SpectralFunctional::Elementary(r) => write!(f, "e{r}"),
        }
    }
}

impl FromStr for SpectralFunctional {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum" => Ok(SpectralFunctional::Sum),
            "product" => Ok(SpectralFunctional::Product),
            "min" => Ok(SpectralFunctional::Min),
            _ => s
                .strip_prefix('e')
                .and_then(|r| r.parse().ok())
                .filter(|&r| r >= 1)
                .map(SpectralFunctional::Elementary)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown functional `{s}`"))),
        }
    }
}

impl From<SpectralFunctional> for String {
    fn from(f: SpectralFunctional) -> Self {
        f.to_string()
    }
}

impl TryFrom<String> for SpectralFunctional {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// A pair of vectors on which a functional broke one of its required properties.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionalCounterexample {
    pub property: &'static str,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub phi_alpha: f64,
    pub phi_beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionalCheck {
    pub functional: SpectralFunctional,
    pub trials: usize,
    pub counterexample: Option<FunctionalCounterexample>,
}

impl FunctionalCheck {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Relative tolerance for the comparisons in [`schur_concave_monotone_check`].
pub const FUNCTIONAL_TOL: f64 = 1e-12;

/// Per trial, on random positive `k`-vectors: permutation invariance,
/// `α ≺ β ⇒ φ(α) ≥ φ(β)`, `α ≤ β ⇒ φ(α) ≤ φ(β)`, and the consequence
/// `α ≺^w β ⇒ φ(α) ≥ φ(β)`.
pub fn schur_concave_monotone_check<R: Rng + ?Sized>(
    phi: SpectralFunctional,
    k: usize,
    trials: usize,
    rng: &mut R,
) -> FunctionalCheck {
    let fails = |lhs: f64, rhs: f64| lhs < rhs - FUNCTIONAL_TOL * lhs.abs().max(rhs.abs()).max(1.0);
    let mut counterexample = None;
    for _ in 0..trials {
        let alpha = random_positive(rng, k);
        let mut beta = alpha.clone();
        beta.shuffle(rng);
        let (pa, pb) = (phi.evaluate(&alpha), phi.evaluate(&beta));
        if fails(pa, pb) || fails(pb, pa) {
            counterexample = Some(("permutation invariance", alpha, beta, pa, pb));
            break;
        }
        let (alpha, beta) = random_majorization_pair(rng, k);
        let (pa, pb) = (phi.evaluate(&alpha), phi.evaluate(&beta));
        if fails(pa, pb) {
            counterexample = Some(("schur concavity", alpha, beta, pa, pb));
            break;
        }
        let (alpha, beta) = random_dominated_pair(rng, k);
        let (pa, pb) = (phi.evaluate(&alpha), phi.evaluate(&beta));
        if fails(pb, pa) {
            counterexample = Some(("monotonicity", alpha, beta, pa, pb));
            break;
        }
        let (alpha, beta) = random_supermajorization_pair(rng, k);
        let (pa, pb) = (phi.evaluate(&alpha), phi.evaluate(&beta));
        if fails(pa, pb) {
            counterexample = Some(("supermajorization", alpha, beta, pa, pb));
            break;
        }
    }
    FunctionalCheck {
        functional: phi,
        trials,
        counterexample: counterexample.map(|(property, alpha, beta, phi_alpha, phi_beta)| {
            FunctionalCounterexample {
                property,
                alpha,
                beta,
                phi_alpha,
                phi_beta,
            }
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn elementary_polynomials() {
        let x = [1.0, 2.0, 3.0];
        assert_eq!(SpectralFunctional::Elementary(1).evaluate(&x), 6.0);
        assert_eq!(SpectralFunctional::Elementary(2).evaluate(&x), 11.0);
        assert_eq!(SpectralFunctional::Elementary(3).evaluate(&x), 6.0);
        assert_eq!(SpectralFunctional::Elementary(4).evaluate(&x), 0.0);
    }

    #[test]
    fn product_on_a_majorization_pair() {
        let p = SpectralFunctional::Product;
        assert!(p.evaluate(&[2.0, 2.0]) >= p.evaluate(&[1.0, 3.0]));
    }

    #[test]
    fn names_round_trip() {
        for f in SpectralFunctional::SHIPPED {
            assert_eq!(f.to_string().parse::<SpectralFunctional>().unwrap(), f);
        }
        assert!("e0".parse::<SpectralFunctional>().is_err());
        assert!("max".parse::<SpectralFunctional>().is_err());
    }

    #[test]
    fn shipped_functionals_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for f in SpectralFunctional::SHIPPED {
            for k in 1..6 {
                assert!(schur_concave_monotone_check(f, k, 200, &mut rng).passed());
            }
        }
    }
}
