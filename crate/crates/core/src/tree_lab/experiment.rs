use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use num_bigint::BigUint;
use num_traits::Zero;

use super::fringe::twin_pairs_of_size;
use super::tree::{prufer_parents, reroot, sample_rooted_cayley, sample_rooted_cayley_with, RandomSource, RootedTree};
use crate::error::{domain, Error, Result};
use crate::profile_enum::{rooted_tree_count, ExactRational};

/// Largest `n` for which [`brute_force_expected`] enumerates by default.
pub const ORACLE_DEFAULT_LIMIT: usize = 8;

/// Exact mean of the ordered twin-pair count of size `k` over all `n^{n−1}`
/// rooted trees on `[n]`. Refuses `n > 8`.
pub fn brute_force_expected(n: usize, k: usize) -> Result<ExactRational> {
    brute_force_expected_with_limit(n, k, ORACLE_DEFAULT_LIMIT)
}

/// [`brute_force_expected`] with a caller-chosen size limit.
pub fn brute_force_expected_with_limit(n: usize, k: usize, limit: usize) -> Result<ExactRational> {
    if n == 0 || k == 0 {
        return Err(domain("n and k must be positive"));
    }
    if n > limit {
        return Err(Error::CostGuard { n, limit });
    }
    let total = brute_force_total(n, k);
    ExactRational::new(BigUint::from(total), rooted_tree_count(n as u64))
}

/// Sum of the twin-pair count over every rooted tree on `[n]`.
fn brute_force_total(n: usize, k: usize) -> u64 {
    if n == 1 {
        return 0;
    }
    let len = n - 2;
    let mut seq = vec![1usize; len];
    let mut total = 0u64;
    loop {
        let base = prufer_parents(n, &seq);
        for root in 1..=n {
            let mut parent = base.clone();
            reroot(&mut parent, root);
            total += twin_pairs_of_size(&RootedTree::from_parts_unchecked(root, parent), k);
        }
        // Next sequence in odometer order.
        let mut i = 0;
        loop {
            if i == len {
                return total;
            }
            seq[i] += 1;
            if seq[i] <= n {
                break;
            }
            seq[i] = 1;
            i += 1;
        }
    }
}

/// Exact running sums of a nonnegative integer statistic.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub count: u64,
    pub sum: u128,
    pub sum_sq: u128,
}

impl Tally {
    pub fn push(&mut self, x: u64) {
        self.count += 1;
        self.sum += x as u128;
        self.sum_sq += (x as u128) * (x as u128);
    }

    /// Combines two tallies; the result does not depend on grouping or order.
    pub fn merge(self, other: Tally) -> Tally {
        Tally { count: self.count + other.count, sum: self.sum + other.sum, sum_sq: self.sum_sq + other.sum_sq }
    }

    pub fn mean(&self) -> f64 {
        crate::profile_enum::ratio_to_f64(&BigUint::from(self.sum), &BigUint::from(self.count))
    }

    /// Unbiased sample variance, evaluated exactly before rounding.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let t = BigUint::from(self.count);
        let s = BigUint::from(self.sum);
        let num = &t * BigUint::from(self.sum_sq) - &s * &s;
        let den = &t * (&t - 1u32);
        if num.is_zero() {
            0.0
        } else {
            crate::profile_enum::ratio_to_f64(&num, &den)
        }
    }
}

/// A Monte Carlo mean with its standard error.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EstimateWithCI {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
}

impl EstimateWithCI {
    pub fn from_tally(t: &Tally, seed: u64) -> Self {
        let se = if t.count == 0 { 0.0 } else { libm::sqrt(t.variance() / t.count as f64) };
        Self { mean: t.mean(), std_error: se, trials: t.count, seed }
    }

    /// Whether `target` lies within `z` standard errors of the mean.
    pub fn covers(&self, target: f64, z: f64) -> bool {
        (self.mean - target).abs() <= z * self.std_error
    }
}

/// Tally of the size-`k` twin-pair count over trials `range`; trial `t`
/// draws its tree from `source.substream(t)`.
pub fn monte_carlo_tally(n: usize, k: usize, source: &RandomSource, range: Range<u64>) -> Result<Tally> {
    if n == 0 || k == 0 {
        return Err(domain("n and k must be positive"));
    }
    let mut tally = Tally::default();
    for t in range {
        let mut rng = source.substream(t).rng();
        let tree = sample_rooted_cayley_with(n, &mut rng)?;
        tally.push(twin_pairs_of_size(&tree, k));
    }
    Ok(tally)
}

/// Sample mean and standard error of the size-`k` twin-pair count over
/// `trials` independent uniform trees.
pub fn monte_carlo_expected(n: usize, k: usize, trials: u64, source: &RandomSource) -> Result<EstimateWithCI> {
    if trials < 2 {
        return Err(domain("Monte Carlo needs at least 2 trials"));
    }
    let tally = monte_carlo_tally(n, k, source, 0..trials)?;
    Ok(EstimateWithCI::from_tally(&tally, source.seed))
}

/// Splits `0..trials` into `parts` contiguous chunks.
pub fn trial_chunks(trials: u64, parts: usize) -> Vec<Range<u64>> {
    let parts = parts.max(1) as u64;
    (0..parts).map(|i| trials * i / parts..trials * (i + 1) / parts).collect()
}

/// Largest twin size in each of `trials` sampled trees.
pub fn max_twin_sizes(n: usize, source: &RandomSource, range: Range<u64>) -> Result<Vec<usize>> {
    range
        .map(|t| sample_rooted_cayley(n, &source.substream(t)).map(|tr| super::fringe::max_twin_size(&tr)))
        .collect()
}
