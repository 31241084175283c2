use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One-based indices `1 ≤ i_1 < … < i_k ≤ n` selecting symplectic eigenvalues.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidIndexSet("empty index set".into()));
        }
        if indices[0] == 0 {
            return Err(Error::InvalidIndexSet("indices are one-based".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidIndexSet(format!(
                "{indices:?} is not strictly increasing"
            )));
        }
        Ok(Self(indices))
    }

    /// Checks that the indices fit `n` symplectic eigenvalues.
    pub fn for_half_dim(indices: Vec<usize>, n: usize) -> Result<Self> {
        let set = Self::new(indices)?;
        set.check(n)?;
        Ok(set)
    }

    pub fn check(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&last) if last <= n => Ok(()),
            _ => Err(Error::InvalidIndexSet(format!("{self} exceeds n = {n}"))),
        }
    }

    /// `{1, …, k}`
    pub fn first(k: usize) -> Result<Self> {
        Self::new((1..=k).collect())
    }

    /// Uniform over the `2ⁿ − 1` nonempty subsets of `{1..n}`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Self {
        assert!((1..64).contains(&n), "half dimension out of range for random index sets");
        let mask = rng.random_range(1..(1u64 << n));
        Self((1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect())
    }

    /// Uniform over the subsets of `{1..n}` of size `k`.
    pub fn random_of_size<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidIndexSet(format!("cannot pick {k} of {n}")));
        }
        let mut chosen = rand::seq::index::sample(rng, n, k).into_vec();
        chosen.sort_unstable();
        Ok(Self(chosen.into_iter().map(|i| i + 1).collect()))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn zero_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i - 1).collect()
    }

    /// `(d_{i_1}, …, d_{i_k})` from an ascending `d`.
    pub fn select(&self, d: &[f64]) -> Vec<f64> {
        self.0.iter().map(|&i| d[i - 1]).collect()
    }
}

impl TryFrom<Vec<usize>> for IndexSet {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<IndexSet> for Vec<usize> {
    fn from(s: IndexSet) -> Self {
        s.0
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn validation() {
        assert!(IndexSet::new(vec![]).is_err());
        assert!(IndexSet::new(vec![0, 1]).is_err());
        assert!(IndexSet::new(vec![2, 2]).is_err());
        assert!(IndexSet::for_half_dim(vec![1, 4], 3).is_err());
        assert_eq!(IndexSet::first(3).unwrap().as_slice(), &[1, 2, 3]);
    }

    #[test]
    fn random_sets_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for n in 1..8 {
            for _ in 0..50 {
                IndexSet::random(&mut rng, n).check(n).unwrap();
                let s = IndexSet::random_of_size(&mut rng, n, 1 + n / 2).unwrap();
                assert_eq!(s.len(), 1 + n / 2);
                s.check(n).unwrap();
            }
        }
    }

    #[test]
    fn display_and_select() {
        let s = IndexSet::new(vec![1, 3]).unwrap();
        assert_eq!(s.to_string(), "{1,3}");
        assert_eq!(s.select(&[1.0, 2.0, 3.0]), vec![1.0, 3.0]);
    }
}
