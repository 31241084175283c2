use std::path::Path;

use sympspec_core::inequalities::geometric_mean;
use sympspec_core::linalg::DenseMatrix;
use sympspec_core::symplectic::{
    compress, symplectic_eigenvalues, williamson, Method, PositiveDefiniteMatrix, SymplecticTupleSet,
    WILLIAMSON_TOL_A, WILLIAMSON_TOL_J,
};
use sympspec_core::Error;

use crate::exit::{CliResult, Failure, Status};
use crate::format;
use crate::io::{matrix_json, read_matrix, write_text, WilliamsonFile};
use crate::report::{SuiteConfig, SuiteReport};
use crate::suites;

pub fn read_pd(path: &Path) -> CliResult<PositiveDefiniteMatrix> {
    let m = read_matrix(path)?;
    PositiveDefiniteMatrix::new(m).map_err(|e| Failure::from(e).context(path))
}

fn spectrum(a: &PositiveDefiniteMatrix, method: Method) -> CliResult<Vec<f64>> {
    Ok(symplectic_eigenvalues(a, method)?.iter().copied().collect())
}

/// Ascending symplectic eigenvalues, one line.
pub fn eig(input: &Path, method: Method) -> CliResult<String> {
    let a = read_pd(input)?;
    Ok(format::vector(&spectrum(&a, method)?))
}

/// The decomposition as JSON; residuals over the contract bounds are an error.
pub fn williamson_json(a: &PositiveDefiniteMatrix) -> CliResult<String> {
    let w = williamson(a)?;
    let file = WilliamsonFile::new(&w, a.matrix());
    let check = |what: &'static str, residual: f64, bound: f64| {
        if residual <= bound {
            Ok(())
        } else {
            Err(Failure::from(Error::Residual { what, residual, bound }))
        }
    };
    check("Mᵀ A M − diag(D, D)", file.residual_a, WILLIAMSON_TOL_A)?;
    check("Mᵀ J M − J", file.residual_j, WILLIAMSON_TOL_J)?;
    Ok(serde_json::to_string_pretty(&file).expect("decompositions serialize"))
}

pub fn williamson_cmd(input: &Path, output: Option<&Path>) -> CliResult<Option<String>> {
    let json = williamson_json(&read_pd(input)?)?;
    match output {
        Some(path) => write_text(path, &json).map(|()| None),
        None => Ok(Some(json)),
    }
}

/// `A#B` as matrix JSON, then its symplectic spectrum.
pub fn mean(a: &Path, b: &Path) -> CliResult<String> {
    let (a, b) = (read_pd(a)?, read_pd(b)?);
    let g = geometric_mean(&a, &b)?;
    let d = spectrum(&g, Method::Williamson)?;
    Ok(format!("{}\n{}", matrix_json(g.matrix()), format::vector(&d)))
}

/// `A_M` for `M` spanned by the columns `x_1..x_k, y_1..y_k` of `tuple`,
/// then `d_M`.
pub fn compress_cmd(a: &Path, tuple: &Path) -> CliResult<String> {
    let a = read_pd(a)?;
    let t = read_matrix(tuple)?;
    let tuple = SymplecticTupleSet::from_columns(&t).map_err(|e| Failure::from(e).context(tuple))?;
    let c = compress(&a, &tuple)?;
    let d: Vec<f64> = c.d.iter().copied().collect();
    Ok(format!("{}\n{}", matrix_json(c.matrix.matrix()), format::vector(&d)))
}

/// The block matrix `diag(1, 2) ⊕ [[0, 1], [2, 0]]`.
pub fn repro_matrix() -> DenseMatrix {
    let mut a = DenseMatrix::zeros(4, 4);
    a[(0, 0)] = 1.0;
    a[(1, 1)] = 2.0;
    a[(2, 3)] = 1.0;
    a[(3, 2)] = 2.0;
    a
}

#[derive(Debug, Clone)]
pub struct Repro {
    pub ata: Vec<f64>,
    pub aat: Vec<f64>,
    pub det_ata: f64,
    pub det_aat: f64,
    pub residuals: [f64; 4],
}

impl Repro {
    pub fn holds(&self, tol: f64) -> bool {
        let close = |d: &[f64], e: [f64; 2]| d.len() == 2 && (d[0] - e[0]).abs() <= tol && (d[1] - e[1]).abs() <= tol;
        close(&self.ata, [2.0, 2.0]) && close(&self.aat, [1.0, 4.0]) && self.residuals.iter().all(|r| *r <= tol)
    }
}

pub fn repro_values() -> CliResult<Repro> {
    let a = repro_matrix();
    let ata = PositiveDefiniteMatrix::new(a.transpose() * &a)?;
    let aat = PositiveDefiniteMatrix::new(&a * a.transpose())?;
    let wa = williamson(&ata)?;
    let wb = williamson(&aat)?;
    Ok(Repro {
        ata: wa.d.iter().copied().collect(),
        aat: wb.d.iter().copied().collect(),
        det_ata: ata.matrix().determinant(),
        det_aat: aat.matrix().determinant(),
        residuals: [wa.residual_a(ata.matrix()), wa.residual_j(), wb.residual_a(aat.matrix()), wb.residual_j()],
    })
}

pub const REPRO_TOL: f64 = 1e-10;

pub fn repro() -> CliResult<(String, Status)> {
    let r = repro_values()?;
    let list = |d: &[f64]| d.iter().map(|&x| format::number(x)).collect::<Vec<_>>().join(", ");
    let mut out = format!("d(AᵀA) = ({}); d(AAᵀ) = ({})\n", list(&r.ata), list(&r.aat));
    out += &format!(
        "det(AᵀA) = {}  det(AAᵀ) = {}  (∏d)² = {} and {}\n",
        format::number(r.det_ata),
        format::number(r.det_aat),
        format::number(r.ata.iter().product::<f64>().powi(2)),
        format::number(r.aat.iter().product::<f64>().powi(2)),
    );
    out += &format!(
        "williamson residuals: {}",
        r.residuals.iter().map(|&x| format!("{x:.1e}")).collect::<Vec<_>>().join(" ")
    );
    let status = if r.holds(REPRO_TOL) { Status::Pass } else { Status::Violation };
    Ok((out, status))
}

/// Runs the suites, always writes the report when a path is configured, and
/// returns it with a one-line summary per suite.
pub fn verify(cfg: &SuiteConfig, threads: usize) -> CliResult<(SuiteReport, String)> {
    let report = suites::run(cfg, threads)?;
    if let Some(path) = &cfg.report_path {
        write_text(path, &report.to_json())?;
    }
    let mut summary = String::new();
    for (suite, t) in &report.aggregate.suites {
        summary += &format!(
            "{:<13} {}/{} passed  worst slack {}\n",
            suite.name(),
            t.passed,
            t.trials,
            t.worst_slack.map_or("-".into(), |s| format!("{s:.3e}"))
        );
    }
    for f in &report.failures {
        summary += &format!("FAIL {} trial {}: {}\n", f.suite, f.trial, f.replay);
    }
    Ok((report, summary.trim_end().to_owned()))
}
