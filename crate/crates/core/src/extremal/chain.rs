use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::SymplecticBasis;
use crate::linalg::{DenseVector, Subspace};
use crate::symplectic::{IndexSet, SymplecticForm, SymplecticTupleSet, TUPLE_TOL};

/// Containment tolerance between consecutive members of a chain.
pub const NESTING_TOL: f64 = 1e-8;

/// Redraws allowed in [`sample_tuple_in_chain`].
pub const SAMPLE_ATTEMPTS: usize = 50;

/// Pairs whose skew product falls below this (relative to their norms) are
/// redrawn rather than rescaled.
const MIN_SKEW_PRODUCT: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `V_1 ⊂ … ⊂ V_k`, `dim V_j = n + i_j`.
    Increasing,
    /// `W_1 ⊃ … ⊃ W_k`, `dim W_j = 2n − i_j + 1`.
    Decreasing,
}

/// A nested chain of subspaces of `R^{2n}` indexed by `i_1 < … < i_k`.
#[derive(Debug, Clone)]
pub struct SubspaceChain {
    pub direction: Direction,
    pub index_set: IndexSet,
    pub subspaces: Vec<Subspace>,
}

impl SubspaceChain {
    pub fn new(direction: Direction, index_set: IndexSet, subspaces: Vec<Subspace>) -> Result<Self> {
        let chain = Self {
            direction,
            index_set,
            subspaces,
        };
        chain.validate()?;
        Ok(chain)
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    pub fn ambient(&self) -> usize {
        self.subspaces.first().map_or(0, Subspace::ambient)
    }

    /// The dimension prescribed for the `j`-th member (zero-based).
    pub fn required_dim(&self, j: usize) -> usize {
        let n = self.ambient() / 2;
        let i = self.index_set.as_slice()[j];
        match self.direction {
            Direction::Increasing => n + i,
            Direction::Decreasing => 2 * n - i + 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.subspaces.len() != self.index_set.len() {
            return Err(Error::ChainHypothesis(format!(
                "{} subspaces for index set {}",
                self.subspaces.len(),
                self.index_set
            )));
        }
        let ambient = self.ambient();
        if !ambient.is_multiple_of(2) {
            return Err(Error::OddDimension(ambient));
        }
        self.index_set.check(ambient / 2)?;
        for (j, s) in self.subspaces.iter().enumerate() {
            if s.ambient() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    found: s.ambient(),
                });
            }
            if s.dim() != self.required_dim(j) {
                return Err(Error::ChainHypothesis(format!(
                    "member {} has dimension {}, expected {}",
                    j + 1,
                    s.dim(),
                    self.required_dim(j)
                )));
            }
        }
        for (j, pair) in self.subspaces.windows(2).enumerate() {
            let nested = match self.direction {
                Direction::Increasing => pair[1].contains_subspace(&pair[0], NESTING_TOL),
                Direction::Decreasing => pair[0].contains_subspace(&pair[1], NESTING_TOL),
            };
            if !nested {
                return Err(Error::ChainHypothesis(format!("members {} and {} are not nested", j + 1, j + 2)));
            }
        }
        Ok(())
    }

    /// `M_j = span{u_1..u_n, v_{i_j}..v_n}`.
    pub fn canonical_decreasing(basis: &SymplecticBasis, index_set: &IndexSet) -> Result<Self> {
        let n = basis.half_dim();
        index_set.check(n)?;
        let subspaces = index_set
            .as_slice()
            .iter()
            .map(|&i| {
                let cols: Vec<DenseVector> = (0..n).map(|l| basis.u(l)).chain((i - 1..n).map(|l| basis.v(l))).collect();
                Subspace::span_of(&cols, basis.ambient_dim())
            })
            .collect();
        Self::new(Direction::Decreasing, index_set.clone(), subspaces)
    }

    /// `V_j = span{u_1..u_n, v_1..v_{i_j}}`.
    pub fn canonical_increasing(basis: &SymplecticBasis, index_set: &IndexSet) -> Result<Self> {
        let n = basis.half_dim();
        index_set.check(n)?;
        let subspaces = index_set
            .as_slice()
            .iter()
            .map(|&i| {
                let cols: Vec<DenseVector> = (0..n).map(|l| basis.u(l)).chain((0..i).map(|l| basis.v(l))).collect();
                Subspace::span_of(&cols, basis.ambient_dim())
            })
            .collect();
        Self::new(Direction::Increasing, index_set.clone(), subspaces)
    }

    /// A random chain cut out by a stack of Gaussian hyperplanes: `W_j` is
    /// the orthogonal complement of the first `i_j − 1` normals, `V_j` that of
    /// the first `n − i_j`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize, direction: Direction, index_set: &IndexSet) -> Result<Self> {
        index_set.check(n)?;
        let normals: Vec<DenseVector> = (0..n)
            .map(|_| DenseVector::from_fn(2 * n, |_, _| rng.sample(StandardNormal)))
            .collect();
        let subspaces = index_set
            .as_slice()
            .iter()
            .map(|&i| {
                let cut = match direction {
                    Direction::Increasing => n - i,
                    Direction::Decreasing => i - 1,
                };
                Subspace::span_of(&normals[..cut], 2 * n).orthogonal_complement()
            })
            .collect();
        Self::new(direction, index_set.clone(), subspaces)
    }
}

/// A symplectically orthonormal tuple with `x_j, y_j ∈ W_j`, drawn greedily
/// from `j = k` down to `1`: `x_j` and a partner are drawn from the part of
/// `W_j` skew-orthogonal to everything chosen so far, and the pair is
/// rescaled so that `⟨x_j, J y_j⟩ = 1`.
pub fn sample_tuple_in_chain<R: Rng + ?Sized>(chain: &SubspaceChain, rng: &mut R) -> Result<SymplecticTupleSet> {
    if chain.direction != Direction::Decreasing {
        return Err(Error::InvalidArgument("tuples are sampled in decreasing chains".into()));
    }
    let dim = chain.ambient();
    let form = SymplecticForm::for_dim(dim)?;
    let k = chain.len();
    let mut last = String::new();
    for _ in 0..SAMPLE_ATTEMPTS {
        let mut xs = vec![DenseVector::zeros(dim); k];
        let mut ys = vec![DenseVector::zeros(dim); k];
        let mut chosen: Vec<DenseVector> = Vec::with_capacity(2 * k);
        let mut ok = true;
        for j in (0..k).rev() {
            let constraints: Vec<DenseVector> = chosen.iter().map(|c| form.apply(c)).collect();
            let free = chain.subspaces[j].complement_of(&Subspace::span_of(&constraints, dim));
            let (Ok(x), Ok(y)) = (free.random_unit(rng), free.random_unit(rng)) else {
                last = format!("no room left at member {}", j + 1);
                ok = false;
                break;
            };
            let s = x.dot(&form.apply(&y));
            if s.abs() < MIN_SKEW_PRODUCT {
                last = format!("degenerate pair at member {} (skew product {s:.1e})", j + 1);
                ok = false;
                break;
            }
            // Split 1/s evenly so neither vector dominates the conditioning.
            let scale = rng.random_range(0.5..2.0) / s.abs().sqrt();
            xs[j] = &x * scale;
            ys[j] = y / (s * scale);
            chosen.push(xs[j].clone());
            chosen.push(ys[j].clone());
        }
        if !ok {
            continue;
        }
        let tuple = SymplecticTupleSet::new(xs, ys)?;
        match tuple.validate(TUPLE_TOL) {
            Ok(()) => return Ok(tuple),
            Err(e) => last = e.to_string(),
        }
    }
    Err(Error::ConstructionFailed {
        attempts: SAMPLE_ATTEMPTS,
        reason: last,
    })
}
