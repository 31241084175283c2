//! Matrix files: JSON `{"dim": N, "entries": [[...], ...]}` with one inner
//! array per row, or CSV with one row per line.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sympspec_core::linalg::DenseMatrix;
use sympspec_core::symplectic::WilliamsonDecomposition;
use sympspec_core::Error;

use crate::exit::{CliResult, Failure};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    /// Number of rows.
    pub dim: usize,
    pub entries: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &DenseMatrix) -> Self {
        Self {
            dim: m.nrows(),
            entries: rows(m),
        }
    }

    pub fn to_matrix(&self) -> Result<DenseMatrix, Error> {
        if self.entries.len() != self.dim {
            return Err(Error::Parse(format!(
                "dim is {} but entries has {} rows",
                self.dim,
                self.entries.len()
            )));
        }
        from_rows(&self.entries)
    }
}

fn rows(m: &DenseMatrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn from_rows(rows: &[Vec<f64>]) -> Result<DenseMatrix, Error> {
    let cols = rows.first().map_or(0, Vec::len);
    if cols == 0 {
        return Err(Error::Parse("matrix has no entries".into()));
    }
    if let Some(i) = rows.iter().position(|r| r.len() != cols) {
        return Err(Error::Parse(format!(
            "row {} has {} entries, expected {cols}",
            i + 1,
            rows[i].len()
        )));
    }
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    Ok(DenseMatrix::from_row_slice(rows.len(), cols, &flat))
}

pub fn parse_json(text: &str) -> Result<DenseMatrix, Error> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.to_matrix()
}

pub fn parse_csv(text: &str) -> Result<DenseMatrix, Error> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        let row = record
            .iter()
            .map(|field| {
                field
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("row {}: `{field}` is not a number", i + 1)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(row);
    }
    from_rows(&out)
}

/// JSON when the extension says so or the text opens with `{`, CSV otherwise.
pub fn parse_matrix(text: &str, path: Option<&Path>) -> Result<DenseMatrix, Error> {
    let ext = path.and_then(Path::extension).and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("json") => parse_json(text),
        Some("csv") => parse_csv(text),
        _ if text.trim_start().starts_with('{') => parse_json(text),
        _ => parse_csv(text),
    }
}

pub fn read_matrix(path: &Path) -> CliResult<DenseMatrix> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    parse_matrix(&text, Some(path)).map_err(|e| Failure::from(e).context(path))
}

pub fn matrix_json(m: &DenseMatrix) -> String {
    serde_json::to_string(&MatrixFile::from_matrix(m)).expect("finite matrices serialize")
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| Failure::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WilliamsonFile {
    pub d: Vec<f64>,
    #[serde(rename = "M")]
    pub m: MatrixFile,
    #[serde(rename = "residual_A")]
    pub residual_a: f64,
    #[serde(rename = "residual_J")]
    pub residual_j: f64,
}

impl WilliamsonFile {
    pub fn new(w: &WilliamsonDecomposition, a: &DenseMatrix) -> Self {
        Self {
            d: w.d.iter().copied().collect(),
            m: MatrixFile::from_matrix(&w.m),
            residual_a: w.residual_a(a),
            residual_j: w.residual_j(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_and_csv_agree() {
        let a = parse_json(r#"{"dim": 2, "entries": [[1, 2.5], [3, -4e-1]]}"#).unwrap();
        let b = parse_csv("1, 2.5\n3,-4e-1\n").unwrap();
        assert_eq!(a, b);
        assert_eq!(a[(1, 1)], -0.4);
        assert_eq!(parse_matrix(&matrix_json(&a), None).unwrap(), a);
    }

    #[test]
    fn malformed_input() {
        assert!(matches!(parse_json(r#"{"dim": 3, "entries": [[1]]}"#), Err(Error::Parse(_))));
        assert!(matches!(parse_json(r#"{"dim": 2, "entries": [[1, 2], [3]]}"#), Err(Error::Parse(_))));
        assert!(matches!(parse_csv("1,2\n3,x\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_csv(""), Err(Error::Parse(_))));
        assert!(matches!(parse_json("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn round_trip_is_exact() {
        let m = DenseMatrix::from_row_slice(2, 2, &[0.1, 1.0 / 3.0, std::f64::consts::PI, 1e-300]);
        assert_eq!(parse_json(&matrix_json(&m)).unwrap(), m);
    }
}
