use rand::Rng;

use super::certificate::{ExtremalCertificate, TupleWitness};
use super::chain::{sample_tuple_in_chain, Direction, SubspaceChain};
use crate::error::{Error, Result};
use crate::geometry::{dual_chain_construct, same_span_trace_check, subspace_prime_sharp, BDiagonalOperator, SymplecticBasis};
use crate::inequalities::{schur_concave_monotone_check, supermajorization_margin, MajorizationVector, SpectralFunctional};
use crate::linalg::{DenseVector, Subspace};
use crate::symplectic::{compress, williamson, IndexSet, PositiveDefiniteMatrix, SymplecticTupleSet};

/// Trials used to validate a functional before it is certified.
pub const FUNCTIONAL_TRIALS: usize = 200;

/// `u, v ∈ M` with `⟨u, J v⟩ = 1` and half-trace at most `d_k`.
#[derive(Debug, Clone)]
pub struct PoincareWitness {
    pub u: DenseVector,
    pub v: DenseVector,
    pub value: f64,
}

/// For `dim M = 2n − k + 1`: a B-unit `u` in the sharp part of
/// `M ∩ span{u_1..u_n, v_1..v_k}` together with `v = u′`.
pub fn poincare_witness<R: Rng + ?Sized>(
    a: &PositiveDefiniteMatrix,
    m: &Subspace,
    basis: &SymplecticBasis,
    k: usize,
    rng: &mut R,
) -> Result<PoincareWitness> {
    let n = basis.half_dim();
    if basis.ambient_dim() != a.dim() || m.ambient() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: m.ambient(),
        });
    }
    if k == 0 || k > n || m.dim() != 2 * n - k + 1 {
        return Err(Error::InvalidArgument(format!(
            "subspace of dimension {} for k = {k}, n = {n}",
            m.dim()
        )));
    }
    let cols: Vec<DenseVector> = (0..n).map(|i| basis.u(i)).chain((0..k).map(|i| basis.v(i))).collect();
    let meet = m.intersect(&Subspace::span_of(&cols, a.dim()));
    let sharp = subspace_prime_sharp(&meet, basis)?.sharp;
    let x = sharp.random_unit(rng)?;
    let u = &x / basis.b_norm(&x)?;
    let v = basis.prime(&u)?;
    let value = 0.5 * (u.dot(&(a.matrix() * &u)) + v.dot(&(a.matrix() * &v)));
    Ok(PoincareWitness { u, v, value })
}

struct Setup {
    basis: SymplecticBasis,
    op: BDiagonalOperator,
    d: Vec<f64>,
    index_set: IndexSet,
    equality: SymplecticTupleSet,
}

impl Setup {
    fn new(a: &PositiveDefiniteMatrix, index_set: &IndexSet) -> Result<Self> {
        index_set.check(a.half_dim())?;
        let w = williamson(a)?;
        Ok(Self {
            basis: SymplecticBasis::from_williamson(&w)?,
            op: BDiagonalOperator::from_williamson(&w)?,
            d: w.d.iter().copied().collect(),
            index_set: index_set.clone(),
            equality: w.eigen_tuple(&index_set.zero_based()),
        })
    }

    fn selected(&self) -> Vec<f64> {
        self.index_set.select(&self.d)
    }
}

fn relative(value: f64, reference: f64, log_scale: bool) -> f64 {
    if log_scale {
        value.ln() - reference.ln()
    } else {
        (value - reference) / reference.abs().max(1.0)
    }
}

struct Side {
    extreme: f64,
    at: String,
    witness: Option<SymplecticTupleSet>,
    count: usize,
    skipped: usize,
    margin: Option<f64>,
    trace_gap: Option<f64>,
}

impl Side {
    fn new(start: f64) -> Self {
        Self {
            extreme: start,
            at: String::new(),
            witness: None,
            count: 0,
            skipped: 0,
            margin: None,
            trace_gap: None,
        }
    }

    fn margin(&mut self, m: f64) {
        self.margin = Some(self.margin.map_or(m, |old| old.min(m)));
    }
}

/// Values of canonical-chain samples; `eval` returns the value and an
/// optional per-sample margin that must stay nonnegative.
fn lower_side<R: Rng + ?Sized>(
    setup: &Setup,
    samples: usize,
    rng: &mut R,
    eval: impl Fn(&SymplecticTupleSet) -> Result<(f64, Option<f64>)>,
) -> Result<Side> {
    let chain = SubspaceChain::canonical_decreasing(&setup.basis, &setup.index_set)?;
    let mut side = Side::new(f64::INFINITY);
    for s in 0..samples {
        let Ok(tuple) = sample_tuple_in_chain(&chain, rng) else {
            side.skipped += 1;
            continue;
        };
        let (value, margin) = eval(&tuple)?;
        side.count += 1;
        if let Some(m) = margin {
            side.margin(m);
        }
        if value < side.extreme {
            side.extreme = value;
            side.at = format!("canonical sample {s}");
            side.witness = Some(tuple);
        }
    }
    Ok(side)
}

fn pair_tuple(vectors: &[DenseVector], basis: &SymplecticBasis) -> Result<SymplecticTupleSet> {
    let primes = vectors.iter().map(|x| basis.prime(x)).collect::<Result<Vec<_>>>()?;
    SymplecticTupleSet::new(vectors.to_vec(), primes)
}

/// For random decreasing chains, the W-side tuple of a dual-chain
/// construction against the canonical increasing chain. `eval` gets the
/// W-side and V-side tuples.
fn upper_side<R: Rng + ?Sized>(
    a: &PositiveDefiniteMatrix,
    setup: &Setup,
    chains: usize,
    rng: &mut R,
    eval: impl Fn(&SymplecticTupleSet, &SymplecticTupleSet) -> Result<(f64, Option<f64>)>,
) -> Result<Side> {
    let n = setup.basis.half_dim();
    let increasing = SubspaceChain::canonical_increasing(&setup.basis, &setup.index_set)?;
    let mut side = Side::new(f64::NEG_INFINITY);
    for c in 0..chains {
        let decreasing = SubspaceChain::random(rng, n, Direction::Decreasing, &setup.index_set)?;
        let Ok(dual) = dual_chain_construct(&increasing.subspaces, &decreasing.subspaces, &setup.basis, rng) else {
            side.skipped += 1;
            continue;
        };
        let trace = same_span_trace_check(a.matrix(), &dual.w, &dual.v, &setup.op)?;
        side.trace_gap = Some(side.trace_gap.unwrap_or(0.0).max(trace.relative_gap()));
        let w_tuple = pair_tuple(&dual.w, &setup.basis)?;
        let v_tuple = pair_tuple(&dual.v, &setup.basis)?;
        let (value, margin) = eval(&w_tuple, &v_tuple)?;
        side.count += 1;
        if let Some(m) = margin {
            side.margin(m);
        }
        if value > side.extreme {
            side.extreme = value;
            side.at = format!("random chain {c}");
            side.witness = Some(w_tuple);
        }
    }
    Ok(side)
}

fn assemble(
    name: String,
    setup: &Setup,
    claimed: f64,
    witness_value: f64,
    lower: Side,
    upper: Option<Side>,
    log_scale: bool,
) -> ExtremalCertificate {
    let (sampled_min, achieved_at, lower_witness) = if witness_value <= lower.extreme {
        (witness_value, "eigenvector tuple".to_string(), None)
    } else {
        (lower.extreme, lower.at, lower.witness.as_ref().map(TupleWitness::from))
    };
    let lower_slack = relative(sampled_min, claimed, log_scale);
    let upper_max = upper.as_ref().filter(|u| u.count > 0).map(|u| u.extreme);
    let upper_slack = upper_max.map_or(0.0, |m| -relative(m, claimed, log_scale));
    let upper_witness = upper
        .as_ref()
        .and_then(|u| u.witness.as_ref())
        .map(TupleWitness::from);
    ExtremalCertificate {
        name,
        index_set: setup.index_set.clone(),
        claimed_value: claimed,
        witness: TupleWitness::from(&setup.equality),
        witness_value,
        sampled_min,
        achieved_at,
        lower_witness,
        upper_max,
        upper_witness,
        samples: lower.count,
        chains: upper.as_ref().map_or(0, |u| u.count),
        skipped: lower.skipped + upper.as_ref().map_or(0, |u| u.skipped),
        log_scale,
        lower_slack,
        upper_slack,
        equality_gap: relative(witness_value, claimed, log_scale).abs(),
        slack: lower_slack.min(upper_slack),
        domination_margin: lower.margin,
        majorization_margin: upper.as_ref().and_then(|u| u.margin),
        trace_gap: upper.as_ref().and_then(|u| u.trace_gap),
    }
}

/// `d_k = max over dim M = 2n−k+1 of min over normalised pairs in M` of the
/// half-trace: samples in `M_k = span{u_1..u_n, v_k..v_n}` for the lower side,
/// Poincaré witnesses in random `M` for the upper side.
pub fn maxmin_check<R: Rng + ?Sized>(
    a: &PositiveDefiniteMatrix,
    k: usize,
    samples: usize,
    subspaces: usize,
    rng: &mut R,
) -> Result<ExtremalCertificate> {
    let n = a.half_dim();
    let setup = Setup::new(a, &IndexSet::for_half_dim(vec![k], n)?)?;
    let claimed = setup.d[k - 1];
    let witness_value = setup.equality.half_trace_sum(a.matrix());
    let lower = lower_side(&setup, samples, rng, |t| Ok((t.half_trace_sum(a.matrix()), None)))?;
    let mut upper = Side::new(f64::NEG_INFINITY);
    for s in 0..subspaces {
        let m = Subspace::random(rng, 2 * n, 2 * n - k + 1);
        let Ok(w) = poincare_witness(a, &m, &setup.basis, k, rng) else {
            upper.skipped += 1;
            continue;
        };
        upper.count += 1;
        if w.value > upper.extreme {
            upper.extreme = w.value;
            upper.at = format!("random subspace {s}");
            upper.witness = Some(SymplecticTupleSet::new(vec![w.u], vec![w.v])?);
        }
    }
    Ok(assemble(format!("maxmin k={k}"), &setup, claimed, witness_value, lower, Some(upper), false))
}

/// `Σ d_{i_j}` as a max over decreasing chains of the min over
/// symplectically orthonormal tuples with `x_j, y_j ∈ W_j` of the half-trace sum.
pub fn wielandt_certify<R: Rng + ?Sized>(
    a: &PositiveDefiniteMatrix,
    index_set: &IndexSet,
    samples: usize,
    chains: usize,
    rng: &mut R,
) -> Result<ExtremalCertificate> {
    let setup = Setup::new(a, index_set)?;
    let claimed: f64 = setup.selected().iter().sum();
    let witness_value = setup.equality.half_trace_sum(a.matrix());
    let lower = lower_side(&setup, samples, rng, |t| Ok((t.half_trace_sum(a.matrix()), None)))?;
    let upper = upper_side(a, &setup, chains, rng, |w, _| Ok((w.half_trace_sum(a.matrix()), None)))?;
    Ok(assemble(format!("wielandt {index_set}"), &setup, claimed, witness_value, lower, Some(upper), false))
}

/// `min_j (d̃_j − d_{i_j}) / max(1, d_{i_j})` for a compressed spectrum `d̃`.
fn domination(compressed: &[f64], selected: &[f64]) -> f64 {
    compressed
        .iter()
        .zip(selected)
        .map(|(c, s)| (c - s) / s.abs().max(1.0))
        .fold(f64::INFINITY, f64::min)
}

/// Shared body of the functional checks: `value` maps a symplectic spectrum
/// to the certified quantity.
fn spectral_check<R: Rng + ?Sized>(
    name: String,
    a: &PositiveDefiniteMatrix,
    setup: &Setup,
    samples: usize,
    chains: usize,
    rng: &mut R,
    value: impl Fn(&[f64]) -> f64,
    log_scale: bool,
) -> Result<ExtremalCertificate> {
    let selected = setup.selected();
    let claimed = value(&selected);
    let spectrum = |t: &SymplecticTupleSet| -> Result<Vec<f64>> { Ok(compress(a, t)?.d.iter().copied().collect()) };
    let witness_value = value(&spectrum(&setup.equality)?);
    let lower = lower_side(setup, samples, rng, |t| {
        let dt = spectrum(t)?;
        Ok((value(&dt), Some(domination(&dt, &selected))))
    })?;
    let upper = upper_side(a, setup, chains, rng, |w, v| {
        let d_u = spectrum(w)?;
        let alpha = v.half_traces(a.matrix());
        // α ≺^w d_U, and α_j ≤ d_{i_j} since v_j lies in span{u_l, v_l : l ≤ i_j}.
        let scale = selected.iter().sum::<f64>().max(1.0);
        let margin = supermajorization_margin(&MajorizationVector::new(alpha.clone()), &MajorizationVector::new(d_u.clone()))?;
        let below = alpha
            .iter()
            .zip(&selected)
            .map(|(x, s)| (s - x) / s.abs().max(1.0))
            .fold(f64::INFINITY, f64::min);
        Ok((value(&d_u), Some((margin / scale).min(below))))
    })?;
    Ok(assemble(name, setup, claimed, witness_value, lower, Some(upper), log_scale))
}

/// The φ-generalisation: `φ(d_{i_1}, …, d_{i_k})` as a max-min of `φ(d_M)`
/// over spans of tuples in decreasing chains. `φ` is validated empirically
/// first.
///
/// The lower side only reports what the samples show. Tuples in the
/// canonical chain exist whose compressed sum, product and determinant fall
/// below the claimed value, so a passing lower side is not a proof.
pub fn phi_extremal_check<R: Rng + ?Sized>(
    a: &PositiveDefiniteMatrix,
    index_set: &IndexSet,
    phi: SpectralFunctional,
    samples: usize,
    chains: usize,
    rng: &mut R,
) -> Result<ExtremalCertificate> {
    let k = index_set.len();
    if !phi.applies_to(k) {
        return Err(Error::FunctionalValidation {
            name: phi.to_string(),
            reason: format!("not defined on {k}-vectors"),
        });
    }
    let check = schur_concave_monotone_check(phi, k, FUNCTIONAL_TRIALS, rng);
    if let Some(c) = check.counterexample {
        return Err(Error::FunctionalValidation {
            name: phi.to_string(),
            reason: format!("{} fails on {:?} and {:?}", c.property, c.alpha, c.beta),
        });
    }
    let setup = Setup::new(a, index_set)?;
    spectral_check(
        format!("phi-extremal {phi} {index_set}"),
        a,
        &setup,
        samples,
        chains,
        rng,
        |d| phi.evaluate(d),
        false,
    )
}

/// `∏ d²_{i_j}` as a max-min of `det(A_M)`, compared in log space. The same
/// caveat as for [`phi_extremal_check`] applies to the lower side.
pub fn det_product_check<R: Rng + ?Sized>(
    a: &PositiveDefiniteMatrix,
    index_set: &IndexSet,
    samples: usize,
    chains: usize,
    rng: &mut R,
) -> Result<ExtremalCertificate> {
    let setup = Setup::new(a, index_set)?;
    spectral_check(
        format!("det-product {index_set}"),
        a,
        &setup,
        samples,
        chains,
        rng,
        |d| (2.0 * d.iter().map(|x| x.ln()).sum::<f64>()).exp(),
        true,
    )
}
