//! Uniform random rooted labeled trees, their fringe subtrees, and twin
//! statistics: exact enumeration for tiny `n` and Monte Carlo beyond.

mod experiment;
mod fringe;
mod tree;

pub use experiment::{
    brute_force_expected, brute_force_expected_with_limit, max_twin_sizes, monte_carlo_expected, monte_carlo_tally,
    trial_chunks, EstimateWithCI, Tally, ORACLE_DEFAULT_LIMIT,
};
pub use fringe::{count_twin_pairs, fringe_profiles, max_twin_size, twin_counts_by_size, twin_pairs_of_size, FringeRecord};
pub use tree::{sample_rooted_cayley, sample_rooted_cayley_with, RandomSource, RootedTree};
