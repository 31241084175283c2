use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use sympspec_cli::io::{matrix_json, parse_json, WilliamsonFile};
use sympspec_cli::report::{Selection, Suite, SuiteConfig};
use sympspec_cli::suites::{run, run_trial, trial_rng};
use sympspec_core::inequalities::polar_factor_check;
use sympspec_core::linalg::DenseMatrix;
use sympspec_core::symplectic::{random_pd, PdMode, PositiveDefiniteMatrix};

fn sympspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sympspec")).args(args).env_remove("SYMPSPEC_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn diag(v: &[f64]) -> DenseMatrix {
    DenseMatrix::from_diagonal(&sympspec_core::linalg::DenseVector::from_column_slice(v))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn eig_examples() {
    let dir = tempfile::tempdir().unwrap();
    let i4 = write(dir.path(), "i4.json", &matrix_json(&DenseMatrix::identity(4, 4)));
    let d = write(dir.path(), "d.csv", "1,0,0,0\n0,2,0,0\n0,0,3,0\n0,0,0,4\n");
    let o = sympspec(&["eig", s(&i4)]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "1 1"));
    let o = sympspec(&["eig", s(&d)]);
    assert_eq!(stdout(&o), "1.732050807568877 2.828427124746190");
    let o = sympspec(&["eig", s(&d), "--method", "skew-canonical"]);
    assert_eq!(o.status.code(), Some(0));

    // AᵀA for the block example.
    let a = sympspec_cli::commands::repro_matrix();
    let ata = write(dir.path(), "ata.json", &matrix_json(&(a.transpose() * &a)));
    assert_eq!(stdout(&sympspec(&["eig", s(&ata)])), "2 2");
}

#[test]
fn eig_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("bad.json", r#"{"dim": 2, "entries": [[1, 0]"#, 2),
        ("ragged.csv", "1,0\n0\n", 2),
        ("words.csv", "1,a\n0,1\n", 2),
        ("nonsym.csv", "1,2\n3,4\n", 3),
        ("indef.csv", "1,0\n0,-1\n", 3),
        ("odd.csv", "1,0,0\n0,1,0\n0,0,1\n", 3),
        ("rect.json", r#"{"dim": 2, "entries": [[1, 0, 0], [0, 1, 0]]}"#, 3),
    ];
    for (name, text, code) in cases {
        let p = write(dir.path(), name, text);
        let o = sympspec(&["eig", s(&p)]);
        assert_eq!(o.status.code(), Some(code), "{name}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
    let o = sympspec(&["eig", s(&dir.path().join("missing.json"))]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn williamson_examples() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", &matrix_json(&diag(&[2.0, 3.0, 2.0, 3.0])));
    let out = dir.path().join("w.json");
    assert_eq!(sympspec(&["williamson", s(&a), "-o", s(&out)]).status.code(), Some(0));
    let w: WilliamsonFile = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!((w.d[0] - 2.0).abs() <= 1e-12 && (w.d[1] - 3.0).abs() <= 1e-12);
    assert!(w.residual_a <= 1e-12 && w.residual_j <= 1e-12);
    // The file carries M: check the normal form directly.
    let m = w.m.to_matrix().unwrap();
    let nf = m.transpose() * diag(&[2.0, 3.0, 2.0, 3.0]) * &m;
    assert!((nf - diag(&[2.0, 3.0, 2.0, 3.0])).norm() <= 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let spectrum = vec![0.5, 1.25, 4.0];
    let p = random_pd(&mut rng, 3, &PdMode::PrescribedSpectrum(spectrum.clone())).unwrap();
    let pf = write(dir.path(), "p.json", &matrix_json(p.matrix()));
    let o = sympspec(&["williamson", s(&pf)]);
    let w: WilliamsonFile = serde_json::from_str(&stdout(&o)).unwrap();
    for (x, y) in w.d.iter().zip(&spectrum) {
        assert!((x - y).abs() <= 1e-9 * y);
    }

    let ns = write(dir.path(), "ns.csv", "1,2,0,0\n0,1,0,0\n0,0,1,0\n0,0,0,1\n");
    let o = sympspec(&["williamson", s(&ns)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not symmetric"));
}

fn mean_of(dir: &Path, a: &DenseMatrix, b: &DenseMatrix) -> (DenseMatrix, String) {
    let pa = write(dir, "a.json", &matrix_json(a));
    let pb = write(dir, "b.json", &matrix_json(b));
    let o = sympspec(&["mean", s(&pa), s(&pb)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let (m, d) = text.split_once('\n').unwrap();
    (parse_json(m).unwrap(), d.to_owned())
}

#[test]
fn mean_examples() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let a = random_pd(&mut rng, 2, &PdMode::Wishart).unwrap();
    let (g, _) = mean_of(dir.path(), a.matrix(), a.matrix());
    assert!((g - a.matrix()).norm() <= 1e-12 * a.matrix().norm());

    let i = DenseMatrix::identity(4, 4);
    let (g, d) = mean_of(dir.path(), &(&i * 4.0), &(&i * 9.0));
    assert!((g - &i * 6.0).norm() <= 1e-12);
    let d: Vec<f64> = d.split(' ').map(|x| x.parse().unwrap()).collect();
    assert!(d.iter().all(|x| (x - 6.0).abs() <= 1e-12));

    let b = random_pd(&mut rng, 2, &PdMode::Wishart).unwrap();
    let (g, _) = mean_of(dir.path(), a.matrix(), b.matrix());
    let g = PositiveDefiniteMatrix::from_rounded(g).unwrap();
    // G A⁻¹ G = B
    let lhs = g.matrix() * a.matrix().clone().try_inverse().unwrap() * g.matrix();
    assert!((lhs - b.matrix()).norm() <= 1e-8 * b.matrix().norm());
    assert!(polar_factor_check(&a, &b).unwrap() <= 1e-8);

    let pa = write(dir.path(), "a4.json", &matrix_json(&i));
    let pb = write(dir.path(), "b6.json", &matrix_json(&DenseMatrix::identity(6, 6)));
    assert_eq!(sympspec(&["mean", s(&pa), s(&pb)]).status.code(), Some(3));
}

#[test]
fn compress_with_standard_tuple() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", &matrix_json(&diag(&[1.0, 2.0, 3.0, 1.0, 2.0, 3.0])));
    // x = e_2, y = e_5: the pair for d = 2.
    let mut t = DenseMatrix::zeros(6, 2);
    t[(1, 0)] = 1.0;
    t[(4, 1)] = 1.0;
    let tf = write(dir.path(), "t.json", &matrix_json(&t));
    let o = sympspec(&["compress", s(&a), s(&tf)]);
    let text = stdout(&o);
    let (m, d) = text.split_once('\n').unwrap();
    assert_eq!(parse_json(m).unwrap(), diag(&[2.0, 2.0]));
    assert_eq!(d, "2");

    t[(4, 1)] = 2.0;
    let tf = write(dir.path(), "t2.json", &matrix_json(&t));
    assert_eq!(sympspec(&["compress", s(&a), s(&tf)]).status.code(), Some(3));
}

#[test]
fn repro_prints_both_spectra() {
    let o = sympspec(&["repro"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("d(AᵀA) = (2, 2); d(AAᵀ) = (1, 4)"), "{}", stdout(&o));
    let r = sympspec_cli::commands::repro_values().unwrap();
    assert!((r.det_ata - 16.0).abs() <= 1e-10 && (r.det_aat - 16.0).abs() <= 1e-10);
    assert!(r.residuals.iter().all(|x| *x <= 1e-10));
}

fn config(suite: Selection, trials: usize, n_min: usize, n_max: usize, seed: u64) -> SuiteConfig {
    SuiteConfig {
        suite,
        trials,
        n_min,
        n_max,
        master_seed: seed,
        samples: 30,
        chains: 10,
        ..SuiteConfig::default()
    }
}

#[test]
fn smallest_case_runs() {
    let report = run(&config(Selection::All, 1, 1, 1, 3), 1).unwrap();
    assert_eq!(report.records.len(), Suite::ALL.len());
    assert!(report.records.iter().all(|r| r.n == 1 && r.error.is_none()), "{:?}", report.failures);
}

#[test]
fn trials_do_not_depend_on_each_other() {
    let cfg = config(Selection::One(Suite::Wielandt), 6, 2, 4, 11);
    let full = run(&cfg, 1).unwrap();
    let alone = run_trial(Suite::Wielandt, &cfg, 4);
    assert_eq!(
        serde_json::to_value(&full.records[4]).unwrap(),
        serde_json::to_value(&alone).unwrap()
    );
    let mut a = trial_rng(1, Suite::Maxmin, 0);
    let mut b = trial_rng(1, Suite::Maxmin, 1);
    let mut c = trial_rng(1, Suite::Wielandt, 0);
    use rand::Rng;
    let (x, y, z): (u64, u64, u64) = (a.random(), b.random(), c.random());
    assert!(x != y && x != z && y != z);
}

fn report_without_timing(path: &Path) -> Value {
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn verify_writes_report_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let args = ["verify", "--suite", "lidskii-add", "--trials", "5", "--nmin", "2", "--nmax", "4", "--seed", "9", "--report"];
    let o = sympspec(&[&args[..], &[s(&report)]].concat());
    assert_eq!(o.status.code(), Some(0));
    let v = report_without_timing(&report);
    for key in ["version", "config", "records", "aggregate", "failures"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["config"]["master_seed"], 9);
    assert_eq!(v["aggregate"]["passed"], 5);
    let trials: Vec<u64> = v["records"].as_array().unwrap().iter().map(|r| r["trial"].as_u64().unwrap()).collect();
    assert_eq!(trials, vec![0, 1, 2, 3, 4]);

    let replay = dir.path().join("replay.json");
    let o = sympspec(&[&args[..], &[s(&replay), "--replay", "3"]].concat());
    assert_eq!(o.status.code(), Some(0));
    let r = report_without_timing(&replay);
    assert_eq!(r["records"][0], v["records"][3]);
}

#[test]
fn seed_comes_from_environment_unless_overridden() {
    let dir = tempfile::tempdir().unwrap();
    let run_with = |env: Option<&str>, extra: &[&str], name: &str| {
        let path = dir.path().join(name);
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_sympspec"));
        cmd.args(["verify", "--suite", "majorization", "--trials", "2", "--report", s(&path)]).args(extra);
        match env {
            Some(v) => cmd.env("SYMPSPEC_SEED", v),
            None => cmd.env_remove("SYMPSPEC_SEED"),
        };
        assert_eq!(cmd.output().unwrap().status.code(), Some(0));
        report_without_timing(&path)
    };
    assert_eq!(run_with(Some("42"), &[], "a.json")["config"]["master_seed"], 42);
    assert_eq!(run_with(Some("42"), &["--seed", "5"], "b.json")["config"]["master_seed"], 5);
    assert_eq!(run_with(None, &[], "c.json")["config"]["master_seed"], 0);
}

#[test]
fn invalid_configurations_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    for bad in [["--trials", "0"], ["--nmin", "0"], ["--tol", "-1"]] {
        let o = sympspec(&[&["verify", "--report", s(&report)][..], &bad[..]].concat());
        assert_eq!(o.status.code(), Some(3), "{bad:?}");
    }
    let o = sympspec(&["verify", "--nmin", "4", "--nmax", "2", "--report", s(&report)]);
    assert_eq!(o.status.code(), Some(3));
    let o = sympspec(&["verify", "--suite", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failures_carry_replay_and_witness() {
    // The multiplicative sandwich is violated on some random instances;
    // find one and check the failure record reproduces it.
    let cfg = config(Selection::One(Suite::LidskiiMult), 400, 2, 3, 1);
    let report = run(&cfg, 0).unwrap();
    let Some(f) = report.failures.first() else {
        panic!("no violation in 400 trials");
    };
    assert!(f.replay.contains("--suite lidskii-mult") && f.replay.contains(&format!("--replay {}", f.trial)));
    let a = serde_json::from_value::<sympspec_cli::io::MatrixFile>(f.witness["A"].clone()).unwrap();
    let b = serde_json::from_value::<sympspec_cli::io::MatrixFile>(f.witness["B"].clone()).unwrap();
    let a = PositiveDefiniteMatrix::new(a.to_matrix().unwrap()).unwrap();
    let b = PositiveDefiniteMatrix::new(b.to_matrix().unwrap()).unwrap();
    let set: sympspec_core::symplectic::IndexSet = serde_json::from_value(f.witness["index_set"].clone()).unwrap();
    let records = sympspec_core::inequalities::multiplicative_lidskii_records(&a, &b, &set).unwrap();
    assert!(records.iter().any(|r| r.relative_slack < -1e-9));
    assert_eq!(report.status(), sympspec_cli::exit::Status::Violation);
}
