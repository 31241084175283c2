use rand::Rng;

use super::basis::{prime_coordinates, SymplecticBasis};
use super::spaces::{prime_closed_span, sharp_subspace, MEMBERSHIP_TOL};
use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, DenseVector, Subspace};

/// Fresh random draws allowed before a construction gives up.
pub const MAX_ATTEMPTS: usize = 20;

/// Tolerance for every postcondition of the constructions.
pub const CONSTRUCTION_TOL: f64 = 1e-8;

/// Below this, the component of `u` outside `U` is neither clearly zero nor
/// usable as a direction; the draw is repeated.
const AMBIGUOUS_COMPONENT: f64 = 1e-5;

#[derive(Debug, Clone)]
pub struct ChainExtension {
    /// `v ∈ W_1♯`, skew-orthogonal to the given `w_j`.
    pub v: DenseVector,
    /// `v_1..v_k` with `v_j ∈ W_j♯`.
    pub vectors: Vec<DenseVector>,
}

#[derive(Debug, Clone)]
pub struct DualChain {
    /// `v_j ∈ V_j♯`
    pub v: Vec<DenseVector>,
    /// `w_j ∈ W_j♯`
    pub w: Vec<DenseVector>,
}

/// Measured postconditions of a dual-chain construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualChainReport {
    pub v_deviation: f64,
    pub w_deviation: f64,
    pub span_angle: f64,
    pub membership: f64,
}

impl DualChainReport {
    pub fn worst(&self) -> f64 {
        self.v_deviation
            .max(self.w_deviation)
            .max(self.span_angle)
            .max(self.membership)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.worst() <= tol
    }
}

enum Step {
    Retry(String),
    Fatal(Error),
}

impl From<Error> for Step {
    fn from(e: Error) -> Self {
        Step::Fatal(e)
    }
}

type StepResult<T> = std::result::Result<T, Step>;

fn draw<R: Rng + ?Sized>(space: &Subspace, rng: &mut R, what: &str) -> StepResult<DenseVector> {
    space
        .random_unit(rng)
        .map_err(|_| Step::Retry(format!("{what} is numerically empty")))
}

fn retry<T, R: Rng + ?Sized>(
    rng: &mut R,
    mut attempt: impl FnMut(&mut R) -> StepResult<T>,
    check: impl Fn(&T) -> Option<String>,
) -> Result<T> {
    let mut reason = String::new();
    for _ in 0..MAX_ATTEMPTS {
        match attempt(rng) {
            Ok(out) => match check(&out) {
                None => return Ok(out),
                Some(r) => reason = r,
            },
            Err(Step::Retry(r)) => reason = r,
            Err(Step::Fatal(e)) => return Err(e),
        }
    }
    Err(Error::ConstructionFailed {
        attempts: MAX_ATTEMPTS,
        reason,
    })
}

/// Largest entry of `G − I`, `G` the Gram matrix of `{x_j, x_j′}` in coordinates.
/// Zero exactly when the `x_j` are B-orthonormal and mutually skew-orthogonal.
pub(crate) fn orthosymplectic_deviation(xs: &[DenseVector]) -> f64 {
    let mut cols: Vec<DenseVector> = xs.to_vec();
    cols.extend(xs.iter().map(prime_coordinates));
    let m = DenseMatrix::from_columns(&cols);
    let g = m.transpose() * &m - DenseMatrix::identity(cols.len(), cols.len());
    g.amax()
}

/// Coordinates of the vectors of a B-orthonormal, skew-orthogonal set.
fn set_coordinates(xs: &[DenseVector], basis: &SymplecticBasis) -> Result<Vec<DenseVector>> {
    xs.iter().map(|x| basis.coordinates(x)).collect()
}

/// `max(res(x), res(x′))` for `x ∈ W♯`.
fn sharp_residual(w: &Subspace, c: &DenseVector) -> f64 {
    w.relative_residual(c).max(w.relative_residual(&prime_coordinates(c)))
}

/// Chain extension in B-coordinates. `sharps[j] = W_{j+1}♯`, `w` has one
/// fewer vector than `sharps`.
fn extend<R: Rng + ?Sized>(
    sharps: &[Subspace],
    w: &[DenseVector],
    rng: &mut R,
) -> StepResult<(DenseVector, Vec<DenseVector>)> {
    let dim = sharps[0].ambient();
    if sharps.len() == 1 {
        let v = draw(&sharps[0], rng, "W_1 sharp")?;
        return Ok((v.clone(), vec![v]));
    }
    let (u, xs) = extend(&sharps[1..], &w[1..], rng)?;
    let u_space = prime_closed_span(w, dim);
    let outside = &u - u_space.project(&u);
    let r = outside.norm();
    let mut vectors = Vec::with_capacity(sharps.len());
    if r <= MEMBERSHIP_TOL {
        let feasible = sharps[0].intersect(&u_space.orthogonal_complement());
        let v = draw(&feasible, rng, "W_1 sharp minus U")?;
        vectors.push(v.clone());
        vectors.extend(xs);
        return Ok((v, vectors));
    }
    if r < AMBIGUOUS_COMPONENT {
        return Err(Step::Retry(format!("component of u outside U is {r:e}")));
    }
    let v = outside / r;
    let mut grown = w.to_vec();
    grown.push(v.clone());
    let u0 = prime_closed_span(&grown, dim);
    let feasible = u0.complement_of(&prime_closed_span(&xs, dim));
    if feasible.dim() != 2 {
        return Err(Step::Retry(format!(
            "complement of x-span has dimension {}",
            feasible.dim()
        )));
    }
    vectors.push(draw(&feasible, rng, "new pair")?);
    vectors.extend(xs);
    Ok((v, vectors))
}

fn check_extension(
    chain: &[Subspace],
    w: &[DenseVector],
    (v, vectors): &(DenseVector, Vec<DenseVector>),
) -> Option<String> {
    let dim = chain[0].ambient();
    let skew = w
        .iter()
        .map(|x| v.dot(&prime_coordinates(x)).abs())
        .fold(0.0, f64::max);
    if sharp_residual(&chain[0], v) > CONSTRUCTION_TOL || skew > CONSTRUCTION_TOL {
        return Some("v left W_1 sharp or the skew complement of the w".into());
    }
    let deviation = orthosymplectic_deviation(vectors);
    if deviation > CONSTRUCTION_TOL {
        return Some(format!("output deviates from orthosymplectic by {deviation:e}"));
    }
    for (j, x) in vectors.iter().enumerate() {
        let res = sharp_residual(&chain[j], x);
        if res > CONSTRUCTION_TOL {
            return Some(format!("v_{} is {res:e} away from W_{} sharp", j + 1, j + 1));
        }
    }
    let mut target = w.to_vec();
    target.push(v.clone());
    let angle = prime_closed_span(&target, dim).distance(&prime_closed_span(vectors, dim));
    if angle > CONSTRUCTION_TOL {
        return Some(format!("spans differ by angle {angle:e}"));
    }
    None
}

/// Given `W_1 ⊇ … ⊇ W_k` in `span(B)` with `dim W_j ≥ m + k − j + 1` and a
/// B-orthonormal skew-orthogonal `w_1..w_{k−1}`, `w_j ∈ W_j♯`, find
/// `v ∈ W_1♯ ∩ {w}^{⊥s}` and a B-orthonormal skew-orthogonal `v_1..v_k`,
/// `v_j ∈ W_j♯`, whose span together with the primes equals that of
/// `w_1..w_{k−1}, v` with their primes.
pub fn chain_extend<R: Rng + ?Sized>(
    chain: &[Subspace],
    w: &[DenseVector],
    basis: &SymplecticBasis,
    rng: &mut R,
) -> Result<ChainExtension> {
    let k = chain.len();
    if k == 0 {
        return Err(Error::InvalidArgument("empty chain".into()));
    }
    if w.len() + 1 != k {
        return Err(Error::ChainHypothesis(format!(
            "{} vectors supplied for a chain of length {k}",
            w.len()
        )));
    }
    let m = basis.half_dim();
    let coords = chain
        .iter()
        .map(|s| basis.subspace_to_coordinates(s))
        .collect::<Result<Vec<_>>>()?;
    for (j, s) in coords.iter().enumerate() {
        if s.dim() < m + k - j {
            return Err(Error::ChainHypothesis(format!(
                "dim W_{} = {} < {}",
                j + 1,
                s.dim(),
                m + k - j
            )));
        }
        if j + 1 < k && !s.contains_subspace(&coords[j + 1], MEMBERSHIP_TOL) {
            return Err(Error::ChainHypothesis(format!("W_{} is not inside W_{}", j + 2, j + 1)));
        }
    }
    let wc = set_coordinates(w, basis)?;
    for (j, c) in wc.iter().enumerate() {
        if sharp_residual(&coords[j], c) > MEMBERSHIP_TOL {
            return Err(Error::ChainHypothesis(format!("w_{} is not in W_{} sharp", j + 1, j + 1)));
        }
    }
    if !wc.is_empty() && orthosymplectic_deviation(&wc) > MEMBERSHIP_TOL {
        return Err(Error::ChainHypothesis(
            "w is not B-orthonormal and skew-orthogonal".into(),
        ));
    }
    let sharps = coords
        .iter()
        .map(sharp_subspace)
        .collect::<Result<Vec<_>>>()?;
    let (v, vectors) = retry(
        rng,
        |rng| extend(&sharps, &wc, rng),
        |out| check_extension(&coords, &wc, out),
    )?;
    Ok(ChainExtension {
        v: basis.from_coordinates(&v),
        vectors: vectors.iter().map(|c| basis.from_coordinates(c)).collect(),
    })
}

fn dual<R: Rng + ?Sized>(
    vs: &[Subspace],
    ws: &[Subspace],
    rng: &mut R,
) -> StepResult<(Vec<DenseVector>, Vec<DenseVector>)> {
    let k = vs.len();
    let dim = vs[0].ambient();
    if k == 1 {
        let sharp = sharp_subspace(&vs[0].intersect(&ws[0]))?;
        let x = draw(&sharp, rng, "V_1 sharp meet W_1 sharp")?;
        return Ok((vec![x.clone()], vec![x]));
    }
    let (mut v_out, x_prev) = dual(&vs[..k - 1], &ws[..k - 1], rng)?;
    let sharps = ws
        .iter()
        .map(|w| sharp_subspace(&vs[k - 1].intersect(w)))
        .collect::<Result<Vec<_>>>()?;
    for (j, s) in sharps.iter().enumerate() {
        if s.dim() < 2 * (k - j) {
            return Err(Step::Retry(format!(
                "S_{} sharp has dimension {} below {}",
                j + 1,
                s.dim(),
                2 * (k - j)
            )));
        }
    }
    let (v, w_out) = extend(&sharps, &x_prev, rng)?;
    let x_span = prime_closed_span(&x_prev, dim);
    let rest = &v - x_span.project(&v);
    let norm = rest.norm();
    if norm < AMBIGUOUS_COMPONENT {
        return Err(Step::Retry("new v lies in the span of the previous pairs".into()));
    }
    v_out.push(rest / norm);
    Ok((v_out, w_out))
}

/// Index pattern `i_1 < … < i_k` read off `dim V_j = m + i_j`, checked against
/// `dim W_j = 2m − i_j + 1` and the nesting of both chains.
fn dual_indices(vs: &[Subspace], ws: &[Subspace], m: usize) -> Result<Vec<usize>> {
    let mut indices = Vec::with_capacity(vs.len());
    for (j, (v, w)) in vs.iter().zip(ws).enumerate() {
        if v.dim() <= m || v.dim() > 2 * m {
            return Err(Error::ChainHypothesis(format!(
                "dim V_{} = {} outside (m, 2m]",
                j + 1,
                v.dim()
            )));
        }
        let i = v.dim() - m;
        if w.dim() != 2 * m - i + 1 {
            return Err(Error::ChainHypothesis(format!(
                "dim W_{} = {}, expected {}",
                j + 1,
                w.dim(),
                2 * m - i + 1
            )));
        }
        if let Some(&prev) = indices.last() {
            if i <= prev {
                return Err(Error::ChainHypothesis("indices are not increasing".into()));
            }
            if !v.contains_subspace(&vs[j - 1], MEMBERSHIP_TOL) {
                return Err(Error::ChainHypothesis(format!("V_{j} is not inside V_{}", j + 1)));
            }
            if !ws[j - 1].contains_subspace(w, MEMBERSHIP_TOL) {
                return Err(Error::ChainHypothesis(format!("W_{} is not inside W_{j}", j + 1)));
            }
        }
        indices.push(i);
    }
    Ok(indices)
}

/// For an increasing chain `V_1 ⊂ … ⊂ V_k` and a decreasing chain
/// `W_1 ⊃ … ⊃ W_k` in `span(B)` with `dim V_j = m + i_j`,
/// `dim W_j = 2m − i_j + 1`, find B-orthonormal skew-orthogonal sets
/// `v_j ∈ V_j♯` and `w_j ∈ W_j♯` spanning, together with their primes, the
/// same subspace. The postconditions are verified before returning.
pub fn dual_chain_construct<R: Rng + ?Sized>(
    increasing: &[Subspace],
    decreasing: &[Subspace],
    basis: &SymplecticBasis,
    rng: &mut R,
) -> Result<DualChain> {
    let k = increasing.len();
    if k == 0 {
        return Err(Error::InvalidArgument("empty chain".into()));
    }
    if decreasing.len() != k {
        return Err(Error::ChainHypothesis(format!(
            "chains of lengths {k} and {}",
            decreasing.len()
        )));
    }
    let to_coords = |chain: &[Subspace]| {
        chain
            .iter()
            .map(|s| basis.subspace_to_coordinates(s))
            .collect::<Result<Vec<_>>>()
    };
    let vc = to_coords(increasing)?;
    let wc = to_coords(decreasing)?;
    dual_indices(&vc, &wc, basis.half_dim())?;
    retry(
        rng,
        |rng| {
            let (v, w) = dual(&vc, &wc, rng)?;
            Ok(DualChain {
                v: v.iter().map(|c| basis.from_coordinates(c)).collect(),
                w: w.iter().map(|c| basis.from_coordinates(c)).collect(),
            })
        },
        |out| match verify_dual_chain(increasing, decreasing, basis, out) {
            Ok(report) if report.holds(CONSTRUCTION_TOL) => None,
            Ok(report) => Some(format!("postcondition off by {:e}", report.worst())),
            Err(e) => Some(e.to_string()),
        },
    )
}

/// Measures the three postconditions of [`dual_chain_construct`] in the
/// ambient space: orthosymplecticity of both sets in B-coordinates, the largest
/// principal angle between the two prime-closed spans, and the relative
/// residual of `v_j, v_j′` in `V_j` and of `w_j, w_j′` in `W_j`.
pub fn verify_dual_chain(
    increasing: &[Subspace],
    decreasing: &[Subspace],
    basis: &SymplecticBasis,
    out: &DualChain,
) -> Result<DualChainReport> {
    let vc = set_coordinates(&out.v, basis)?;
    let wc = set_coordinates(&out.w, basis)?;
    let ambient_span = |xs: &[DenseVector]| {
        let dim = basis.ambient_dim();
        let mut cols = Vec::with_capacity(2 * xs.len());
        for c in xs {
            cols.push(basis.from_coordinates(c));
            cols.push(basis.from_coordinates(&prime_coordinates(c)));
        }
        Subspace::span_of(&cols, dim)
    };
    let membership = |chain: &[Subspace], xs: &[DenseVector]| {
        chain
            .iter()
            .zip(xs)
            .map(|(s, c)| {
                let x = basis.from_coordinates(c);
                let xp = basis.from_coordinates(&prime_coordinates(c));
                s.relative_residual(&x).max(s.relative_residual(&xp))
            })
            .fold(0.0, f64::max)
    };
    Ok(DualChainReport {
        v_deviation: orthosymplectic_deviation(&vc),
        w_deviation: orthosymplectic_deviation(&wc),
        span_angle: ambient_span(&vc).distance(&ambient_span(&wc)),
        membership: membership(increasing, &vc).max(membership(decreasing, &wc)),
    })
}
