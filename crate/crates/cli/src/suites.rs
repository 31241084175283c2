use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use sympspec_core::extremal::{
    det_product_check, maxmin_check, phi_extremal_check, wielandt_certify, Direction, ExtremalCertificate,
    SubspaceChain,
};
use sympspec_core::geometry::{dual_chain_construct, same_span_trace_check, verify_dual_chain, BDiagonalOperator};
use sympspec_core::inequalities::{
    additive_lidskii_records, majorize, multiplicative_lidskii_records, random_positive, random_supermajorization_pair,
    schur_concave_monotone_check, supermajorize, InequalityRecord, MajorizationVector, SpectralFunctional,
};
use sympspec_core::symplectic::{
    random_pd, random_spectrum, symplectic_eigenvalues, williamson, IndexSet, Method, PdMode, PositiveDefiniteMatrix,
    WILLIAMSON_TOL_A, WILLIAMSON_TOL_J,
};
use sympspec_core::{Error, Result};

use crate::exit::{status_of, CliResult, Failure, Status};
use crate::io::MatrixFile;
use crate::report::{Suite, SuiteConfig, SuiteReport, Timing, TrialRecord};

/// Agreement required between the three eigenvalue routes.
pub const METHOD_AGREEMENT: f64 = 1e-8;
/// Recovery required of a prescribed spectrum.
pub const SPECTRUM_RECOVERY: f64 = 1e-9;
/// Bound on dual-chain orthosymplecticity, span and membership defects.
pub const CONSTRUCTION_BOUND: f64 = 1e-8;
/// Relative tolerance on determinants of compressions; sampled tuples are
/// symplectic only to about this order, and `det` squares the error.
pub const DET_TOL: f64 = 1e-8;
/// Largest chain length in the construction suite.
pub const CONSTRUCTION_MAX_K: usize = 4;
/// Vector pairs compared against the partial-sum evaluator per majorization trial.
pub const MAJORIZATION_PAIRS: usize = 100;
/// Functional-property trials per shipped functional per majorization trial.
pub const FUNCTIONAL_TRIALS: usize = 10;

/// The random stream of one trial, independent of every other trial.
pub fn trial_rng(master_seed: u64, suite: Suite, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream((suite.id() << 32) | trial as u64);
    rng
}

struct Outcome {
    passed: bool,
    slack: f64,
    detail: Value,
}

fn matrix_value(a: &PositiveDefiniteMatrix) -> Value {
    serde_json::to_value(MatrixFile::from_matrix(a.matrix())).expect("matrices serialize")
}

fn prescribed(rng: &mut ChaCha8Rng, n: usize) -> Result<PositiveDefiniteMatrix> {
    let d = random_spectrum(rng, n, 0.2, 5.0);
    random_pd(rng, n, &PdMode::PrescribedSpectrum(d))
}

fn relative_gap(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b).abs() / b.abs().max(1.0))
        .fold(0.0, f64::max)
}

fn williamson_trial(rng: &mut ChaCha8Rng, n: usize, w: &mut Map<String, Value>) -> Result<Outcome> {
    let spectrum = rng.random::<bool>().then(|| {
        let mut d = random_spectrum(rng, n, 0.2, 5.0);
        d.sort_by(f64::total_cmp);
        d
    });
    let a = match &spectrum {
        Some(d) => random_pd(rng, n, &PdMode::PrescribedSpectrum(d.clone()))?,
        None => random_pd(rng, n, &PdMode::Wishart)?,
    };
    w.insert("A".into(), matrix_value(&a));
    let wd = williamson(&a)?;
    let d: Vec<f64> = wd.d.iter().copied().collect();
    let residual_a = wd.residual_a(a.matrix());
    let residual_j = wd.residual_j();
    let mut method_gap: f64 = 0.0;
    for method in [Method::SkewCanonical, Method::JaEigen] {
        let other: Vec<f64> = symplectic_eigenvalues(&a, method)?.iter().copied().collect();
        method_gap = method_gap.max(relative_gap(&other, &d));
    }
    let recovery = spectrum.as_ref().map(|s| relative_gap(&d, s));
    let slack = (WILLIAMSON_TOL_A - residual_a)
        .min(WILLIAMSON_TOL_J - residual_j)
        .min(METHOD_AGREEMENT - method_gap)
        .min(recovery.map_or(f64::INFINITY, |r| SPECTRUM_RECOVERY - r));
    Ok(Outcome {
        passed: slack >= 0.0,
        slack,
        detail: json!({
            "mode": if spectrum.is_some() { "prescribed" } else { "wishart" },
            "d": d,
            "residual_A": residual_a,
            "residual_J": residual_j,
            "method_gap": method_gap,
            "recovery_error": recovery,
        }),
    })
}

fn certificate(cert: ExtremalCertificate, tol: f64) -> Outcome {
    Outcome {
        passed: cert.passes(tol),
        slack: cert.slack,
        detail: serde_json::to_value(&cert).expect("certificates serialize"),
    }
}

fn inequalities(records: Vec<InequalityRecord>, tol: f64) -> Outcome {
    Outcome {
        passed: records.iter().all(|r| r.passes(tol)),
        slack: records.iter().map(|r| r.relative_slack).fold(f64::INFINITY, f64::min),
        detail: serde_json::to_value(&records).expect("records serialize"),
    }
}

/// The functional used by trial `index` of the phi-extremal suite.
pub fn phi_for_trial(index: usize) -> SpectralFunctional {
    [SpectralFunctional::Sum, SpectralFunctional::Product, SpectralFunctional::Min][index % 3]
}

fn construction_trial(rng: &mut ChaCha8Rng, n: usize, tol: f64, w: &mut Map<String, Value>) -> Result<Outcome> {
    let a = prescribed(rng, n)?;
    w.insert("A".into(), matrix_value(&a));
    let op = BDiagonalOperator::from_williamson(&williamson(&a)?)?;
    let k = rng.random_range(1..=n.min(CONSTRUCTION_MAX_K));
    let set = IndexSet::random_of_size(rng, n, k)?;
    w.insert("index_set".into(), json!(set));
    let increasing = SubspaceChain::random(rng, n, Direction::Increasing, &set)?;
    let decreasing = SubspaceChain::random(rng, n, Direction::Decreasing, &set)?;
    let basis_of = |c: &SubspaceChain| -> Vec<Value> {
        c.subspaces
            .iter()
            .map(|s| serde_json::to_value(MatrixFile::from_matrix(s.basis())).expect("matrices serialize"))
            .collect()
    };
    w.insert("increasing".into(), json!(basis_of(&increasing)));
    w.insert("decreasing".into(), json!(basis_of(&decreasing)));
    let out = dual_chain_construct(&increasing.subspaces, &decreasing.subspaces, &op.basis, rng)?;
    let report = verify_dual_chain(&increasing.subspaces, &decreasing.subspaces, &op.basis, &out)?;
    let trace = same_span_trace_check(a.matrix(), &out.w, &out.v, &op)?;
    let gap = trace.relative_gap();
    let slack = (CONSTRUCTION_BOUND - report.worst()).min(tol - gap);
    Ok(Outcome {
        passed: slack >= 0.0,
        slack,
        detail: json!({
            "index_set": set,
            "v_deviation": report.v_deviation,
            "w_deviation": report.w_deviation,
            "span_angle": report.span_angle,
            "membership": report.membership,
            "trace_lhs": trace.lhs,
            "trace_rhs": trace.rhs,
            "trace_gap": gap,
        }),
    })
}

/// `α ≺^w β` straight from sorted partial sums.
pub fn partial_sum_supermajorizes(alpha: &[f64], beta: &[f64]) -> bool {
    let sorted = |v: &[f64]| {
        let mut v = v.to_vec();
        v.sort_by(f64::total_cmp);
        v
    };
    let (a, b) = (sorted(alpha), sorted(beta));
    let (mut sa, mut sb) = (0.0, 0.0);
    a.iter().zip(&b).all(|(x, y)| {
        sa += x;
        sb += y;
        sa >= sb
    })
}

fn majorization_trial(rng: &mut ChaCha8Rng, n: usize) -> Result<Outcome> {
    let k = n.max(2);
    let mut disagreements = 0usize;
    for _ in 0..MAJORIZATION_PAIRS {
        // Small integers make ties and equal totals common.
        let alpha: Vec<f64> = (0..k).map(|_| rng.random_range(0..6) as f64).collect();
        let beta: Vec<f64> = (0..k).map(|_| rng.random_range(0..6) as f64).collect();
        let (ma, mb) = (MajorizationVector::new(alpha.clone()), MajorizationVector::new(beta.clone()));
        let expected_super = partial_sum_supermajorizes(&alpha, &beta);
        let expected_major = expected_super && alpha.iter().sum::<f64>() == beta.iter().sum::<f64>();
        if supermajorize(&ma, &mb)? != expected_super || majorize(&ma, &mb)? != expected_major {
            disagreements += 1;
        }
    }
    let mut lemma_slack = f64::INFINITY;
    let mut functional_failures = Vec::new();
    for phi in SpectralFunctional::SHIPPED.into_iter().filter(|p| p.applies_to(k)) {
        let check = schur_concave_monotone_check(phi, k, FUNCTIONAL_TRIALS, rng);
        if let Some(c) = check.counterexample {
            functional_failures.push(json!({ "functional": phi, "counterexample": c }));
        }
        let (alpha, beta) = random_supermajorization_pair(rng, k);
        let (pa, pb) = (phi.evaluate(&alpha), phi.evaluate(&beta));
        lemma_slack = lemma_slack.min((pa - pb) / pa.abs().max(pb.abs()).max(1.0));
    }
    let probe = random_positive(rng, k);
    let reflexive = supermajorize(&probe.clone().into(), &probe.clone().into())?;
    let passed = disagreements == 0 && functional_failures.is_empty() && reflexive && lemma_slack >= -1e-12;
    Ok(Outcome {
        passed,
        slack: lemma_slack,
        detail: json!({
            "k": k,
            "pairs": MAJORIZATION_PAIRS,
            "disagreements": disagreements,
            "lemma_slack": lemma_slack,
            "functional_failures": functional_failures,
        }),
    })
}

fn body(suite: Suite, cfg: &SuiteConfig, index: usize, rng: &mut ChaCha8Rng, n: usize, w: &mut Map<String, Value>) -> Result<Outcome> {
    let tol = cfg.tol;
    match suite {
        Suite::Williamson => williamson_trial(rng, n, w),
        Suite::Maxmin => {
            let a = prescribed(rng, n)?;
            w.insert("A".into(), matrix_value(&a));
            let k = rng.random_range(1..=n);
            w.insert("k".into(), json!(k));
            Ok(certificate(maxmin_check(&a, k, cfg.samples, cfg.chains, rng)?, tol))
        }
        Suite::Wielandt | Suite::PhiExtremal | Suite::DetProduct => {
            let a = prescribed(rng, n)?;
            w.insert("A".into(), matrix_value(&a));
            let set = IndexSet::random(rng, n);
            w.insert("index_set".into(), json!(set));
            let cert = match suite {
                Suite::Wielandt => wielandt_certify(&a, &set, cfg.samples, cfg.chains, rng)?,
                Suite::PhiExtremal => {
                    let phi = phi_for_trial(index);
                    w.insert("phi".into(), json!(phi));
                    phi_extremal_check(&a, &set, phi, cfg.samples, cfg.chains, rng)?
                }
                _ => {
                    let cert = det_product_check(&a, &set, cfg.samples, cfg.chains, rng)?;
                    return Ok(certificate(cert, tol.max(DET_TOL)));
                }
            };
            Ok(certificate(cert, tol))
        }
        Suite::LidskiiAdd | Suite::LidskiiMult => {
            let a = random_pd(rng, n, &PdMode::Wishart)?;
            let b = random_pd(rng, n, &PdMode::Wishart)?;
            let set = IndexSet::random(rng, n);
            w.insert("A".into(), matrix_value(&a));
            w.insert("B".into(), matrix_value(&b));
            w.insert("index_set".into(), json!(set));
            let records = if suite == Suite::LidskiiAdd {
                additive_lidskii_records(&a, &b, &set)?
            } else {
                multiplicative_lidskii_records(&a, &b, &set)?
            };
            Ok(inequalities(records, tol))
        }
        Suite::Construction => construction_trial(rng, n, tol, w),
        Suite::Majorization => majorization_trial(rng, n),
    }
}

/// Runs trial `index` of `suite`. Everything random comes from
/// [`trial_rng`], so the result depends only on the configuration.
pub fn run_trial(suite: Suite, cfg: &SuiteConfig, index: usize) -> TrialRecord {
    let start = Instant::now();
    let mut rng = trial_rng(cfg.master_seed, suite, index);
    let n = rng.random_range(cfg.n_min..=cfg.n_max);
    let mut witness = Map::new();
    witness.insert("n".into(), json!(n));
    let result = body(suite, cfg, index, &mut rng, n, &mut witness);
    let (passed, slack, error, detail, status) = match result {
        Ok(o) => (o.passed, Some(o.slack), None, o.detail, if o.passed { Status::Pass } else { Status::Violation }),
        Err(e) => (false, None, Some(e.to_string()), Value::Null, error_status(&e)),
    };
    TrialRecord {
        suite,
        trial: index,
        n,
        passed,
        slack,
        error,
        detail,
        status,
        witness: Value::Object(witness),
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

fn error_status(e: &Error) -> Status {
    match status_of(e) {
        Status::Numerical => Status::Numerical,
        // Generated inputs are valid by construction, so anything else is a
        // defect in the check itself.
        _ => Status::Violation,
    }
}

/// Runs every trial of the configuration, on `threads` workers (`1` runs
/// serially on the calling thread; `0` uses rayon's default).
pub fn run(cfg: &SuiteConfig, threads: usize) -> CliResult<SuiteReport> {
    cfg.validate()?;
    let started_unix_ms = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis());
    let start = Instant::now();
    let indices: Vec<usize> = match cfg.replay {
        Some(t) => vec![t],
        None => (0..cfg.trials).collect(),
    };
    let jobs: Vec<(Suite, usize)> = cfg
        .suite
        .suites()
        .into_iter()
        .flat_map(|s| indices.iter().map(move |&t| (s, t)))
        .collect();
    let (records, used) = if threads == 1 {
        (jobs.iter().map(|&(s, t)| run_trial(s, cfg, t)).collect::<Vec<_>>(), 1)
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Failure::new(Status::Validation, e.to_string()))?;
        let records = pool.install(|| jobs.par_iter().map(|&(s, t)| run_trial(s, cfg, t)).collect());
        (records, pool.current_num_threads())
    };
    let mut suites_ms = std::collections::BTreeMap::new();
    for r in &records {
        *suites_ms.entry(r.suite).or_insert(0.0) += r.elapsed_ms;
    }
    let timing = Timing {
        started_unix_ms,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        threads: used,
        suites_ms,
    };
    Ok(SuiteReport::new(cfg.clone(), records, timing))
}
