use rand::Rng;
use serde::Serialize;

use super::mean::geometric_mean;
use crate::error::Result;
use crate::symplectic::{random_pd, symplectic_eigenvalues, IndexSet, Method, PdMode, PositiveDefiniteMatrix};

/// Which side is expected to be larger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    LessEq,
    #[serde(rename = ">=")]
    GreaterEq,
}

/// Where a record came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceDigest {
    pub n: usize,
    pub index_set: IndexSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial: Option<usize>,
}

/// One evaluated inequality `lhs (relation) rhs`.
///
/// With `log_scale` both sides are natural logarithms of products, so the
/// slack is already a relative quantity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityRecord {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    /// Nonnegative exactly when the inequality holds.
    pub slack: f64,
    pub relative_slack: f64,
    pub log_scale: bool,
    pub instance: InstanceDigest,
}

impl InequalityRecord {
    pub fn new(name: &str, lhs: f64, rhs: f64, relation: Relation, log_scale: bool, instance: InstanceDigest) -> Self {
        let slack = match relation {
            Relation::LessEq => rhs - lhs,
            Relation::GreaterEq => lhs - rhs,
        };
        let relative_slack = if log_scale { slack } else { slack / lhs.abs().max(1.0) };
        Self {
            name: name.to_owned(),
            lhs,
            rhs,
            relation,
            slack,
            relative_slack,
            log_scale,
            instance,
        }
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.relative_slack >= -tol
    }
}

/// Tolerance on the relative slack of every inequality record.
pub const INEQUALITY_TOL: f64 = 1e-9;

fn spectrum(a: &PositiveDefiniteMatrix) -> Result<Vec<f64>> {
    Ok(symplectic_eigenvalues(a, Method::Williamson)?.iter().copied().collect())
}

fn digest(n: usize, index_set: &IndexSet) -> InstanceDigest {
    InstanceDigest {
        n,
        index_set: index_set.clone(),
        seed: None,
        trial: None,
    }
}

/// `Σ d_{i_j}(A+B) ≥ Σ d_{i_j}(A) + Σ_{j≤k} d_j(B)` for the given index set,
/// for `{1..k}` and for the single index `{i_1}`.
pub fn additive_lidskii_records(
    a: &PositiveDefiniteMatrix,
    b: &PositiveDefiniteMatrix,
    index_set: &IndexSet,
) -> Result<Vec<InequalityRecord>> {
    let n = a.half_dim();
    index_set.check(n)?;
    let da = spectrum(a)?;
    let db = spectrum(b)?;
    let dab = spectrum(&a.add(b)?)?;
    let record = |name: &str, set: &IndexSet| {
        let k = set.len();
        let lhs: f64 = set.select(&dab).iter().sum();
        let rhs: f64 = set.select(&da).iter().sum::<f64>() + db[..k].iter().sum::<f64>();
        InequalityRecord::new(name, lhs, rhs, Relation::GreaterEq, false, digest(n, set))
    };
    let head = IndexSet::first(index_set.len())?;
    let single = IndexSet::new(vec![index_set.as_slice()[0]])?;
    Ok(vec![
        record("additive lidskii", index_set),
        record("hiroshima sum", &head),
        record("additive single index", &single),
    ])
}

/// The sandwich
/// `∏ d_{i_j}(A) d_j(B) ≤ ∏ d_{i_j}²(A#B) ≤ ∏ d_{i_j}(A) d_{n−j+1}(B)`
/// with `k = |index set|`, plus the full products
/// `∏_{j≤k} d_j²(A#B) ≥ ∏_{j≤k} d_j(A) d_j(B)` and
/// `∏_{j≥k} d_j²(A#B) ≤ ∏_{j≥k} d_j(A) d_j(B)`, all in log space.
pub fn multiplicative_lidskii_records(
    a: &PositiveDefiniteMatrix,
    b: &PositiveDefiniteMatrix,
    index_set: &IndexSet,
) -> Result<Vec<InequalityRecord>> {
    let n = a.half_dim();
    index_set.check(n)?;
    let la: Vec<f64> = spectrum(a)?.iter().map(|d| d.ln()).collect();
    let lb: Vec<f64> = spectrum(b)?.iter().map(|d| d.ln()).collect();
    let lg: Vec<f64> = spectrum(&geometric_mean(a, b)?)?.iter().map(|d| d.ln()).collect();
    let k = index_set.len();
    let middle: f64 = 2.0 * index_set.select(&lg).iter().sum::<f64>();
    let selected_a: f64 = index_set.select(&la).iter().sum();
    let lower = selected_a + lb[..k].iter().sum::<f64>();
    let upper = selected_a + lb[n - k..].iter().sum::<f64>();
    let head = IndexSet::first(k)?;
    let tail = IndexSet::new((k..=n).collect())?;
    let sum_over = |set: &IndexSet, v: &[f64]| set.select(v).iter().sum::<f64>();
    Ok(vec![
        InequalityRecord::new("multiplicative lower", middle, lower, Relation::GreaterEq, true, digest(n, index_set)),
        InequalityRecord::new("multiplicative upper", middle, upper, Relation::LessEq, true, digest(n, index_set)),
        InequalityRecord::new(
            "product head",
            2.0 * sum_over(&head, &lg),
            sum_over(&head, &la) + sum_over(&head, &lb),
            Relation::GreaterEq,
            true,
            digest(n, &head),
        ),
        InequalityRecord::new(
            "product tail",
            2.0 * sum_over(&tail, &lg),
            sum_over(&tail, &la) + sum_over(&tail, &lb),
            Relation::LessEq,
            true,
            digest(n, &tail),
        ),
    ])
}

/// One random Wishart pair with a uniformly random index set.
pub fn additive_lidskii_trial<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<Vec<InequalityRecord>> {
    let a = random_pd(rng, n, &PdMode::Wishart)?;
    let b = random_pd(rng, n, &PdMode::Wishart)?;
    additive_lidskii_records(&a, &b, &IndexSet::random(rng, n))
}

pub fn multiplicative_lidskii_trial<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<Vec<InequalityRecord>> {
    let a = random_pd(rng, n, &PdMode::Wishart)?;
    let b = random_pd(rng, n, &PdMode::Wishart)?;
    multiplicative_lidskii_records(&a, &b, &IndexSet::random(rng, n))
}
