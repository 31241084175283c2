use serde::Serialize;

use crate::symplectic::{IndexSet, SymplecticTupleSet};

/// A symplectic tuple as plain columns, for reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TupleWitness {
    pub xs: Vec<Vec<f64>>,
    pub ys: Vec<Vec<f64>>,
}

impl From<&SymplecticTupleSet> for TupleWitness {
    fn from(t: &SymplecticTupleSet) -> Self {
        let cols = |v: &[crate::linalg::DenseVector]| v.iter().map(|x| x.iter().copied().collect()).collect();
        Self {
            xs: cols(&t.xs),
            ys: cols(&t.ys),
        }
    }
}

/// Witness-based evidence for a max-min identity `claimed = max min value`.
///
/// The lower side samples tuples in the canonical chain, where every value
/// must be at least `claimed`; the equality tuple from the eigenbasis must
/// attain it. The upper side builds, for random chains, one tuple whose value
/// must be at most `claimed`. Slacks are relative, or log-ratios when
/// `log_scale` is set; negative means violated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalCertificate {
    pub name: String,
    pub index_set: IndexSet,
    pub claimed_value: f64,
    pub witness: TupleWitness,
    pub witness_value: f64,
    pub sampled_min: f64,
    pub achieved_at: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_witness: Option<TupleWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper_witness: Option<TupleWitness>,
    pub samples: usize,
    pub chains: usize,
    /// Samples or chains whose construction failed and were not counted.
    pub skipped: usize,
    pub log_scale: bool,
    pub lower_slack: f64,
    pub upper_slack: f64,
    pub equality_gap: f64,
    /// `min(lower_slack, upper_slack)`
    pub slack: f64,
    /// Smallest `d̃_j − d_{i_j}` over canonical compressions, relative.
    /// Reported only: elementwise domination is not implied by the
    /// extremal identity and does fail on some tuples.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domination_margin: Option<f64>,
    /// Smallest supermajorization margin of the half-trace vector over the
    /// compressed spectrum, relative.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub majorization_margin: Option<f64>,
    /// Largest relative gap in the trace equality on the upper side.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_gap: Option<f64>,
}

impl ExtremalCertificate {
    pub fn passes(&self, tol: f64) -> bool {
        self.slack >= -tol
            && self.equality_gap <= tol
            && self.majorization_margin.is_none_or(|m| m >= -tol)
            && self.trace_gap.is_none_or(|g| g <= tol)
    }
}
