//! Logical entropy of set partitions and finite distributions.

use rayon::prelude::*;
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{keyed, Stream};

/// Tolerance on the sum of a [`ProbabilityVector`].
pub const PROB_SUM_TOL: f64 = 1e-9;

/// Trials per independently keyed Monte Carlo batch.
pub(crate) const MC_BATCH: u64 = 1 << 14;

/// Partition of `{0, …, n-1}` stored as an element → block map.
///
/// Block labels are normalized by first occurrence, so two partitions with
/// the same blocks compare equal regardless of how they were labelled.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetPartition {
    block_of: Vec<usize>,
    num_blocks: usize,
}

impl SetPartition {
    /// Builds a partition from arbitrary block labels.
    pub fn from_labels<T: PartialEq>(labels: &[T]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidPartition("universe is empty".into()));
        }
        let mut seen: Vec<&T> = Vec::new();
        let block_of = labels
            .iter()
            .map(|l| match seen.iter().position(|s| *s == l) {
                Some(i) => i,
                None => {
                    seen.push(l);
                    seen.len() - 1
                }
            })
            .collect();
        Ok(Self {
            block_of,
            num_blocks: seen.len(),
        })
    }

    /// Builds a partition from explicit blocks, which must cover `0..n` exactly once.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidPartition("universe is empty".into()));
        }
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition(format!("block {b} is empty")));
            }
            for &u in block {
                if u >= n {
                    return Err(Error::InvalidPartition(format!(
                        "element {u} outside universe of size {n}"
                    )));
                }
                if labels[u] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "element {u} assigned to more than one block"
                    )));
                }
                labels[u] = b;
            }
        }
        if let Some(u) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidPartition(format!("element {u} is unassigned")));
        }
        Self::from_labels(&labels)
    }

    pub fn discrete(n: usize) -> Result<Self> {
        Self::from_labels(&(0..n).collect::<Vec<_>>())
    }

    pub fn indiscrete(n: usize) -> Result<Self> {
        Self::from_labels(&vec![0usize; n])
    }

    pub fn universe_size(&self) -> usize {
        self.block_of.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.num_blocks
    }

    pub fn block_of(&self, u: usize) -> usize {
        self.block_of[u]
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_blocks];
        for &b in &self.block_of {
            sizes[b] += 1;
        }
        sizes
    }

    /// True if every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Self) -> bool {
        let n = self.universe_size();
        n == coarser.universe_size()
            && (0..n).all(|u| {
                (0..n).all(|v| {
                    self.block_of[u] != self.block_of[v] || coarser.block_of[u] == coarser.block_of[v]
                })
            })
    }
}

/// Number of ordered pairs `(u, u')` lying in different blocks: `n² - Σ|B|²`.
pub fn dit_count(p: &SetPartition) -> u64 {
    let n = p.universe_size() as u64;
    n * n - p.block_sizes().iter().map(|&s| (s * s) as u64).sum::<u64>()
}

/// `|dit(π)| / n²`.
pub fn partition_logical_entropy(p: &SetPartition) -> f64 {
    let n = p.universe_size() as f64;
    dit_count(p) as f64 / (n * n)
}

/// Finite probability distribution, validated on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityVector {
    probs: Vec<f64>,
}

impl ProbabilityVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidProbabilities("empty vector".into()));
        }
        if let Some(p) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidProbabilities(format!("entry {p} outside [0, 1]")));
        }
        let s: f64 = probs.iter().sum();
        if (s - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidProbabilities(format!("entries sum to {s}")));
        }
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidProbabilities("empty vector".into()));
        }
        Self::new(vec![1.0 / n as f64; n])
    }

    /// Block masses `|B|/n` of a partition of a uniformly weighted universe.
    pub fn from_partition(p: &SetPartition) -> Self {
        let n = p.universe_size() as f64;
        Self {
            probs: p.block_sizes().iter().map(|&s| s as f64 / n).collect(),
        }
    }

    /// Block masses of a partition whose elements carry the given weights.
    pub fn block_masses(p: &SetPartition, element_probs: &ProbabilityVector) -> Result<Self> {
        if element_probs.len() != p.universe_size() {
            return Err(Error::DimensionMismatch {
                expected: p.universe_size(),
                got: element_probs.len(),
            });
        }
        let mut masses = vec![0.0; p.num_blocks()];
        for (u, &w) in element_probs.probs.iter().enumerate() {
            masses[p.block_of(u)] += w;
        }
        Ok(Self { probs: masses })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Inverse-CDF draw from a uniform variate in `[0, 1)`.
    pub(crate) fn draw(&self, u: f64) -> usize {
        let mut acc = 0.0;
        for (i, &p) in self.probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        // u landed in the rounding gap above the last cumulative sum
        self.probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
    }
}

/// `1 - Σ p_i²`.
pub fn distribution_logical_entropy(p: &ProbabilityVector) -> f64 {
    1.0 - p.probs.iter().map(|x| x * x).sum::<f64>()
}

/// Fraction of `trials` i.i.d. draw pairs from `p` that land on different outcomes.
///
/// Trials are split into fixed-size batches, each with its own keyed RNG,
/// so the estimate does not depend on how batches are scheduled.
pub fn two_draw_distinction_mc(p: &ProbabilityVector, trials: u64, seed: u64) -> Result<f64> {
    let distinct = count_distinct_pairs(p, trials, seed, Stream::ClassicalTwoDraw)?;
    Ok(distinct as f64 / trials as f64)
}

pub(crate) fn count_distinct_pairs(
    p: &ProbabilityVector,
    trials: u64,
    seed: u64,
    stream: Stream,
) -> Result<u64> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let batches = trials.div_ceil(MC_BATCH);
    Ok((0..batches)
        .into_par_iter()
        .map(|b| {
            let len = MC_BATCH.min(trials - b * MC_BATCH);
            let mut rng = keyed(seed, stream, 0, b);
            let mut hits = 0u64;
            for _ in 0..len {
                let i = p.draw(rng.random::<f64>());
                let j = p.draw(rng.random::<f64>());
                hits += (i != j) as u64;
            }
            hits
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force over all ordered pairs.
    fn dit_pairs(p: &SetPartition) -> u64 {
        let n = p.universe_size();
        let mut count = 0;
        for u in 0..n {
            for v in 0..n {
                if p.block_of(u) != p.block_of(v) {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn dit_examples() {
        let p = SetPartition::from_blocks(6, &[vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap();
        assert_eq!(dit_pairs(&p), 24);
        assert_eq!(dit_count(&p), 24);
        assert_eq!(dit_count(&SetPartition::indiscrete(6).unwrap()), 0);
        assert_eq!(dit_count(&SetPartition::discrete(6).unwrap()), 30);
    }

    #[test]
    fn partition_entropy_examples() {
        let p = SetPartition::from_blocks(6, &[vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap();
        assert!((partition_logical_entropy(&p) - 2.0 / 3.0).abs() < 1e-15);
        for n in 1..10 {
            let d = SetPartition::discrete(n).unwrap();
            assert!((partition_logical_entropy(&d) - (1.0 - 1.0 / n as f64)).abs() < 1e-15);
            assert_eq!(partition_logical_entropy(&SetPartition::indiscrete(n).unwrap()), 0.0);
        }
    }

    #[test]
    fn labels_are_normalized() {
        let a = SetPartition::from_labels(&['x', 'y', 'x']).unwrap();
        let b = SetPartition::from_labels(&[7, 3, 7]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.block_of(2), 0);
    }

    #[test]
    fn invalid_partitions() {
        assert!(SetPartition::from_blocks(3, &[vec![0, 1]]).is_err());
        assert!(SetPartition::from_blocks(3, &[vec![0, 1], vec![1, 2]]).is_err());
        assert!(SetPartition::from_blocks(3, &[vec![0, 1, 2], vec![]]).is_err());
        assert!(SetPartition::from_blocks(3, &[vec![0, 1, 5]]).is_err());
        assert!(SetPartition::from_labels::<u8>(&[]).is_err());
    }

    #[test]
    fn refinement() {
        let coarse = SetPartition::from_blocks(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        let fine = SetPartition::from_blocks(4, &[vec![0], vec![1], vec![2, 3]]).unwrap();
        assert!(fine.refines(&coarse));
        assert!(!coarse.refines(&fine));
    }

    #[test]
    fn distribution_examples() {
        for d in 1..8 {
            let u = ProbabilityVector::uniform(d).unwrap();
            assert!((distribution_logical_entropy(&u) - (1.0 - 1.0 / d as f64)).abs() < 1e-15);
        }
        let det = ProbabilityVector::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(distribution_logical_entropy(&det), 0.0);
        // collision probability over all 9 ordered draws is 0.375
        let p = ProbabilityVector::new(vec![0.5, 0.25, 0.25]).unwrap();
        let collide: f64 = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .filter(|(i, j)| i == j)
            .map(|(i, j)| p.probs()[i] * p.probs()[j])
            .sum();
        assert!((collide - 0.375).abs() < 1e-15);
        assert!((distribution_logical_entropy(&p) - 0.625).abs() < 1e-15);
    }

    #[test]
    fn invalid_probabilities() {
        assert!(ProbabilityVector::new(vec![]).is_err());
        assert!(ProbabilityVector::new(vec![0.5, 0.4]).is_err());
        assert!(ProbabilityVector::new(vec![1.5, -0.5]).is_err());
    }

    #[test]
    fn weighted_block_masses() {
        let part = SetPartition::from_blocks(3, &[vec![0, 2], vec![1]]).unwrap();
        let w = ProbabilityVector::new(vec![0.5, 0.25, 0.25]).unwrap();
        let m = ProbabilityVector::block_masses(&part, &w).unwrap();
        assert_eq!(m.probs(), &[0.75, 0.25]);
    }

    #[test]
    fn mc_deterministic_distribution() {
        let p = ProbabilityVector::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(two_draw_distinction_mc(&p, 1000, 3).unwrap(), 0.0);
        assert!(two_draw_distinction_mc(&p, 0, 3).is_err());
    }

    #[test]
    fn mc_within_three_sigma() {
        let trials = 1_000_000u64;
        for (probs, expected) in [(vec![0.5, 0.5], 0.5), (vec![0.5, 0.25, 0.25], 0.625)] {
            let p = ProbabilityVector::new(probs).unwrap();
            let est = two_draw_distinction_mc(&p, trials, 20261019).unwrap();
            let sigma = (expected * (1.0 - expected) / trials as f64).sqrt();
            assert!((est - expected).abs() <= 3.0 * sigma, "{est} vs {expected}");
        }
    }

    #[test]
    fn mc_is_seed_deterministic() {
        let p = ProbabilityVector::new(vec![0.2, 0.3, 0.5]).unwrap();
        let a = two_draw_distinction_mc(&p, 50_000, 9).unwrap();
        let b = two_draw_distinction_mc(&p, 50_000, 9).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
