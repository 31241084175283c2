use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sympspec_core::extremal::*;
use sympspec_core::geometry::SymplecticBasis;
use sympspec_core::inequalities::SpectralFunctional;
use sympspec_core::linalg::{DenseMatrix, DenseVector, Subspace};
use sympspec_core::symplectic::*;
use sympspec_core::Error;

fn diag(v: &[f64]) -> PositiveDefiniteMatrix {
    PositiveDefiniteMatrix::new(DenseMatrix::from_diagonal(&DenseVector::from_column_slice(v))).unwrap()
}

fn prescribed(rng: &mut ChaCha8Rng, n: usize) -> PositiveDefiniteMatrix {
    let d = random_spectrum(rng, n, 0.2, 5.0);
    random_pd(rng, n, &PdMode::PrescribedSpectrum(d)).unwrap()
}

fn oracle_spectrum(a: &PositiveDefiniteMatrix) -> Vec<f64> {
    // |eigenvalues of JA| come in pairs ±i d.
    let form = SymplecticForm::for_dim(a.dim()).unwrap();
    let ja = form.apply_matrix(a.matrix());
    let mut im: Vec<f64> = ja.complex_eigenvalues().iter().map(|z| z.im.abs()).collect();
    im.sort_by(f64::total_cmp);
    im.into_iter().step_by(2).collect()
}

#[test]
fn chains_have_prescribed_dimensions() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 1..=6 {
        for _ in 0..10 {
            let set = IndexSet::random(&mut rng, n);
            for dir in [Direction::Increasing, Direction::Decreasing] {
                let chain = SubspaceChain::random(&mut rng, n, dir, &set).unwrap();
                for j in 0..set.len() {
                    assert_eq!(chain.subspaces[j].dim(), chain.required_dim(j));
                }
            }
            let a = prescribed(&mut rng, n);
            let basis = SymplecticBasis::from_williamson(&williamson(&a).unwrap()).unwrap();
            SubspaceChain::canonical_decreasing(&basis, &set).unwrap();
            SubspaceChain::canonical_increasing(&basis, &set).unwrap();
        }
    }
}

#[test]
fn chain_validation_rejects_bad_chains() {
    let set = IndexSet::new(vec![1, 2]).unwrap();
    let w1 = Subspace::full(4);
    let w2 = Subspace::coordinate(4, &[0, 1, 2]);
    assert!(SubspaceChain::new(Direction::Decreasing, set.clone(), vec![w1.clone(), w2.clone()]).is_ok());
    let skew = Subspace::coordinate(4, &[1, 2, 3]);
    let nested_wrong = SubspaceChain::new(Direction::Decreasing, set.clone(), vec![w2.clone(), skew]);
    assert!(matches!(nested_wrong, Err(Error::ChainHypothesis(_))));
    let short = SubspaceChain::new(Direction::Decreasing, set, vec![w1]);
    assert!(matches!(short, Err(Error::ChainHypothesis(_))));
}

#[test]
fn sampled_tuples_are_valid_and_in_chain() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut failures = 0;
    let mut draws = 0;
    for _ in 0..200 {
        let n = rng.random_range(1..=6);
        let k = rng.random_range(1..=n.min(3));
        let set = IndexSet::random_of_size(&mut rng, n, k).unwrap();
        let chain = SubspaceChain::random(&mut rng, n, Direction::Decreasing, &set).unwrap();
        for _ in 0..5 {
            draws += 1;
            match sample_tuple_in_chain(&chain, &mut rng) {
                Ok(t) => {
                    t.validate(TUPLE_TOL).unwrap();
                    for j in 0..k {
                        assert!(chain.subspaces[j].relative_residual(&t.xs[j]) <= 1e-9);
                        assert!(chain.subspaces[j].relative_residual(&t.ys[j]) <= 1e-9);
                    }
                }
                Err(_) => failures += 1,
            }
        }
    }
    assert!((failures as f64) < 0.05 * draws as f64, "{failures} of {draws}");
}

#[test]
fn sampling_needs_a_decreasing_chain() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let set = IndexSet::first(1).unwrap();
    let chain = SubspaceChain::random(&mut rng, 2, Direction::Increasing, &set).unwrap();
    assert!(sample_tuple_in_chain(&chain, &mut rng).is_err());
}

#[test]
fn poincare_full_space_and_diagonal() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let a = diag(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
    let w = williamson(&a).unwrap();
    let basis = SymplecticBasis::from_williamson(&w).unwrap();
    let p = poincare_witness(&a, &Subspace::full(6), &basis, 1, &mut rng).unwrap();
    assert!((p.value - w.d[0]).abs() <= 1e-12);
    assert!((symplectic_inner(&p.u, &p.v).unwrap() - 1.0).abs() <= 1e-12);
    // M = span of everything except v_1..v_{k−1}.
    for k in 1..=3 {
        let cols: Vec<DenseVector> = (0..3).map(|i| basis.u(i)).chain((k - 1..3).map(|i| basis.v(i))).collect();
        let m = Subspace::span_of(&cols, 6);
        let p = poincare_witness(&a, &m, &basis, k, &mut rng).unwrap();
        assert!(p.value <= w.d[k - 1] + 1e-12);
        assert!((p.value - w.d[k - 1]).abs() <= 1e-9, "the only room left is the k-th pair");
    }
}

#[test]
fn poincare_random_subspaces() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let n = rng.random_range(1..=6);
        let k = rng.random_range(1..=n);
        let a = prescribed(&mut rng, n);
        let w = williamson(&a).unwrap();
        let basis = SymplecticBasis::from_williamson(&w).unwrap();
        let m = Subspace::random(&mut rng, 2 * n, 2 * n - k + 1);
        let p = poincare_witness(&a, &m, &basis, k, &mut rng).unwrap();
        assert!(p.value <= w.d[k - 1] + 1e-9 * w.d[k - 1].max(1.0));
        assert!((symplectic_inner(&p.u, &p.v).unwrap() - 1.0).abs() <= 1e-9);
        assert!(m.relative_residual(&p.u) <= 1e-8 && m.relative_residual(&p.v) <= 1e-8);
    }
}

#[test]
fn poincare_rejects_wrong_dimension() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let a = diag(&[1.0; 4]);
    let basis = SymplecticBasis::standard(2);
    assert!(poincare_witness(&a, &Subspace::full(4), &basis, 2, &mut rng).is_err());
}

#[test]
fn maxmin_identity_and_diagonal() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let id = diag(&[1.0; 6]);
    for k in 1..=3 {
        let c = maxmin_check(&id, k, 100, 20, &mut rng).unwrap();
        assert_eq!(c.claimed_value, 1.0);
        assert!(c.sampled_min >= 1.0 - 1e-12);
        assert!(c.passes(1e-9), "{c:?}");
    }
    let a = diag(&[1.0, 2.0, 3.0, 4.0]);
    let c = maxmin_check(&a, 2, 100, 20, &mut rng).unwrap();
    assert!((c.claimed_value - 8f64.sqrt()).abs() <= 1e-12);
    assert!(c.passes(1e-9), "{c:?}");
    assert!(c.equality_gap <= 1e-10);
}

#[test]
fn maxmin_random_prescribed() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n in 1..=5 {
        let a = prescribed(&mut rng, n);
        let d = oracle_spectrum(&a);
        for k in 1..=n {
            let c = maxmin_check(&a, k, 50, 20, &mut rng).unwrap();
            assert!((c.claimed_value - d[k - 1]).abs() <= 1e-9 * d[k - 1]);
            assert!(c.passes(1e-9), "{c:?}");
            assert!(c.equality_gap <= 1e-10);
        }
    }
}

#[test]
fn wielandt_full_index_set_and_diagonal() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let a = prescribed(&mut rng, 4);
    let all = IndexSet::first(4).unwrap();
    let c = wielandt_certify(&a, &all, 50, 20, &mut rng).unwrap();
    let d = oracle_spectrum(&a);
    assert!((c.claimed_value - d.iter().sum::<f64>()).abs() <= 1e-9);
    assert!(c.passes(1e-9), "{c:?}");

    let a = diag(&[1.0, 5.0, 2.0, 4.0, 3.0, 2.0]);
    let set = IndexSet::new(vec![1, 3]).unwrap();
    let c = wielandt_certify(&a, &set, 50, 20, &mut rng).unwrap();
    let mut expected = [(1.0f64 * 4.0).sqrt(), (5.0f64 * 3.0).sqrt(), (2.0f64 * 2.0).sqrt()];
    expected.sort_by(f64::total_cmp);
    assert!((c.claimed_value - expected[0] - expected[2]).abs() <= 1e-12);
    assert!(c.equality_gap <= 1e-12);
    assert!(c.passes(1e-9), "{c:?}");
}

#[test]
fn wielandt_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let start = Instant::now();
    for _ in 0..30 {
        let n = rng.random_range(1..=6);
        let a = prescribed(&mut rng, n);
        let set = IndexSet::random(&mut rng, n);
        let c = wielandt_certify(&a, &set, 200, 100, &mut rng).unwrap();
        assert!(c.lower_slack >= -1e-9, "{c:?}");
        assert!(c.equality_gap <= 1e-10, "{c:?}");
        assert!(c.upper_slack >= -1e-9, "{c:?}");
        assert!(c.trace_gap.unwrap() <= 1e-9, "{c:?}");
        assert_eq!(c.samples + c.chains + c.skipped, 300);
        assert!(c.chains >= 90, "{} of 100 chains constructed", c.chains);
    }
    eprintln!("30 Wielandt certificates in {:?}", start.elapsed());
}

/// Checks everything a φ or determinant certificate can promise. A negative
/// lower slack must come with a witness that really undercuts the claim: a
/// valid tuple in the canonical chain whose compression, evaluated by the
/// oracle, falls below `claimed`.
fn assert_sound(a: &PositiveDefiniteMatrix, c: &ExtremalCertificate, value: impl Fn(&[f64]) -> f64) {
    assert!(c.upper_slack >= -1e-9, "{c:?}");
    assert!(c.equality_gap <= 1e-10, "{c:?}");
    assert!(c.majorization_margin.unwrap() >= -1e-9, "{c:?}");
    assert!(c.trace_gap.unwrap() <= 1e-9, "{c:?}");
    if c.lower_slack >= -1e-9 {
        return;
    }
    let w = c.lower_witness.as_ref().expect("violations carry a witness");
    let col = |v: &Vec<f64>| DenseVector::from_column_slice(v);
    let tuple = SymplecticTupleSet::new(w.xs.iter().map(col).collect(), w.ys.iter().map(col).collect()).unwrap();
    tuple.validate(1e-9).unwrap();
    let basis = SymplecticBasis::from_williamson(&williamson(a).unwrap()).unwrap();
    let chain = SubspaceChain::canonical_decreasing(&basis, &c.index_set).unwrap();
    for j in 0..tuple.len() {
        assert!(chain.subspaces[j].relative_residual(&tuple.xs[j]) <= 1e-9);
        assert!(chain.subspaces[j].relative_residual(&tuple.ys[j]) <= 1e-9);
    }
    let t = tuple.matrix();
    let am = PositiveDefiniteMatrix::from_rounded(t.transpose() * a.matrix() * &t).unwrap();
    let got = value(&oracle_spectrum(&am));
    assert!(got < c.claimed_value * (1.0 - 1e-6), "{got} against {}", c.claimed_value);
}

#[test]
fn phi_extremal_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let n = rng.random_range(2..=5);
        let a = prescribed(&mut rng, n);
        let set = IndexSet::random(&mut rng, n);
        let sum = phi_extremal_check(&a, &set, SpectralFunctional::Sum, 30, 10, &mut rng).unwrap();
        let w = wielandt_certify(&a, &set, 30, 10, &mut rng).unwrap();
        assert_eq!(sum.claimed_value, w.claimed_value);
        assert!(w.passes(1e-9), "{w:?}");
        let product = phi_extremal_check(&a, &set, SpectralFunctional::Product, 30, 10, &mut rng).unwrap();
        let det = det_product_check(&a, &set, 30, 10, &mut rng).unwrap();
        assert!((product.claimed_value - det.claimed_value.sqrt()).abs() <= 1e-10 * product.claimed_value);
        assert_sound(&a, &sum, |d| d.iter().sum());
        assert_sound(&a, &product, |d| d.iter().product());
        assert_sound(&a, &det, |d| d.iter().map(|x| x * x).product());
    }
}

#[test]
fn phi_extremal_random_functionals() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for phi in [SpectralFunctional::Sum, SpectralFunctional::Product, SpectralFunctional::Min, SpectralFunctional::Elementary(2)] {
        for _ in 0..10 {
            let n = rng.random_range(2..=5);
            let a = prescribed(&mut rng, n);
            let set = IndexSet::random_of_size(&mut rng, n, 2).unwrap();
            let c = phi_extremal_check(&a, &set, phi, 50, 20, &mut rng).unwrap();
            assert_sound(&a, &c, |d| phi.evaluate(d));
        }
    }
}

#[test]
fn phi_min_matches_eigenvalue_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let a = prescribed(&mut rng, 4);
    let set = IndexSet::new(vec![2, 4]).unwrap();
    let d = oracle_spectrum(&a);
    let c = phi_extremal_check(&a, &set, SpectralFunctional::Min, 50, 20, &mut rng).unwrap();
    assert!((c.claimed_value - d[1]).abs() <= 1e-9 * d[1]);
    assert!(c.passes(1e-9));
}

#[test]
fn phi_product_on_diagonal_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let a = diag(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
    let set = IndexSet::new(vec![1, 3]).unwrap();
    let c = phi_extremal_check(&a, &set, SpectralFunctional::Product, 50, 20, &mut rng).unwrap();
    assert!((c.claimed_value - (4f64 * 18.0).sqrt()).abs() <= 1e-12);
    assert!(c.passes(1e-9));
}

#[test]
fn phi_rejects_inapplicable_functional() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let a = diag(&[1.0; 4]);
    let set = IndexSet::first(1).unwrap();
    let r = phi_extremal_check(&a, &set, SpectralFunctional::Elementary(2), 10, 10, &mut rng);
    assert!(matches!(r, Err(Error::FunctionalValidation { .. })));
}

#[test]
fn det_product_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let id = diag(&[1.0; 6]);
    let c = det_product_check(&id, &IndexSet::new(vec![2]).unwrap(), 50, 10, &mut rng).unwrap();
    assert_eq!(c.claimed_value, 1.0);
    assert!(c.sampled_min >= 1.0 - 1e-12);
    let a = diag(&[1.0, 2.0, 3.0, 4.0]);
    let c = det_product_check(&a, &IndexSet::first(1).unwrap(), 50, 10, &mut rng).unwrap();
    assert!((c.claimed_value - 3.0).abs() <= 1e-12);
    assert!(c.passes(1e-8), "{c:?}");
    for n in 2..=5 {
        let a = prescribed(&mut rng, n);
        let set = IndexSet::random(&mut rng, n);
        let c = det_product_check(&a, &set, 100, 20, &mut rng).unwrap();
        assert!(c.lower_slack >= (1.0f64 - 1e-8).ln(), "{c:?}");
        assert!(c.equality_gap <= 1e-8);
        assert!(c.passes(1e-8), "{c:?}");
    }
}

/// `A = diag(1,2,3,1,2,3)`, index set `{1,3}`: a tuple in the canonical chain
/// whose compression has `d̃ = (1.643, 2.522)`, so `d̃_2 < d_3 = 3`, while
/// sum, product and min of `d̃` still dominate those of `(d_1, d_3)`.
#[test]
fn canonical_compressions_need_not_dominate_elementwise() {
    let a = diag(&[1.0, 2.0, 3.0, 1.0, 2.0, 3.0]);
    let xs = [
        [-1.1093971781031866, 0.6027928430528529, 0.5761486156702283, 0.034826389533493596, -0.5983540891064485, -0.8071426178411336],
        [-0.6711241878737376, -0.916055575623433, 1.3076296113403065, 0.0, 0.0, -0.921100573878233],
    ];
    let ys = [
        [0.3234967562847418, 0.9883639075221777, -0.8380418107103449, -0.5337245009540008, 0.3198410587295035, 0.5404569838138401],
        [0.6813856772122322, -0.8346563515294365, 0.20569331171586858, 0.0, 0.0, 0.61985119142783],
    ];
    let col = |v: &[f64; 6]| DenseVector::from_column_slice(v);
    let tuple = SymplecticTupleSet::new(xs.iter().map(col).collect(), ys.iter().map(col).collect()).unwrap();
    tuple.validate(1e-12).unwrap();
    let basis = SymplecticBasis::standard(3);
    let set = IndexSet::new(vec![1, 3]).unwrap();
    let chain = SubspaceChain::canonical_decreasing(&basis, &set).unwrap();
    for j in 0..2 {
        assert!(chain.subspaces[j].relative_residual(&tuple.xs[j]) <= 1e-14);
        assert!(chain.subspaces[j].relative_residual(&tuple.ys[j]) <= 1e-14);
    }
    let dt = compress(&a, &tuple).unwrap().d;
    assert!(dt[0] >= 1.0);
    assert!(dt[1] < 3.0 - 0.4, "{dt}");
    for phi in [SpectralFunctional::Sum, SpectralFunctional::Product, SpectralFunctional::Min] {
        assert!(phi.evaluate(dt.as_slice()) >= phi.evaluate(&[1.0, 3.0]));
    }
}

#[test]
fn canonical_compressions_can_undercut_sum_product_and_determinant() {
    let a = diag(&[1.0, 2.0, 3.0, 1.0, 2.0, 3.0]);
    let xs = [
        [2.318257065713729, 0.0357201689792192, 0.09241455875813381, -0.001365785214122242, 0.19105660789354123, -0.17882839452220323],
        [3.9355290900628064, -0.4499827519985879, -0.07810293904304116, 0.0, 0.0, -0.8373165818428354],
    ];
    let ys = [
        [19.99999591976151, -2.8445699536476527, -1.4190609516002175, 0.4171359507126002, 1.6520188109175886, -3.7121851152163523],
        [1.1718495174412562, 1.7164825270345436, 1.2907124107962338, 0.0, 0.0, 1.033698666647313],
    ];
    let col = |v: &[f64; 6]| DenseVector::from_column_slice(v);
    let tuple = SymplecticTupleSet::new(xs.iter().map(col).collect(), ys.iter().map(col).collect()).unwrap();
    tuple.validate(1e-12).unwrap();
    let set = IndexSet::new(vec![1, 3]).unwrap();
    let chain = SubspaceChain::canonical_decreasing(&SymplecticBasis::standard(3), &set).unwrap();
    for j in 0..2 {
        assert!(chain.subspaces[j].relative_residual(&tuple.xs[j]) <= 1e-14);
        assert!(chain.subspaces[j].relative_residual(&tuple.ys[j]) <= 1e-14);
    }
    let dt = compress(&a, &tuple).unwrap().d;
    assert!(SpectralFunctional::Sum.evaluate(dt.as_slice()) < 4.0 - 0.5, "{dt}");
    assert!(SpectralFunctional::Product.evaluate(dt.as_slice()) < 3.0 - 0.5, "{dt}");

    let cols: Vec<DenseVector> = tuple.xs.iter().chain(tuple.ys.iter()).cloned().collect();
    let t = DenseMatrix::from_columns(&cols);
    let det = (t.transpose() * a.matrix() * &t).determinant();
    assert!(det < 9.0 * 0.75, "{det}");

    // Half-traces still respect the additive bound.
    assert!(tuple.half_trace_sum(a.matrix()) >= 4.0);
}
