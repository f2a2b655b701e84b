//! Deterministic parallel drivers. Work is split into a fixed number of
//! pieces that does not depend on the thread count, and results are combined
//! in piece order, so outputs never depend on `--threads`.

use std::ops::Range;

use rayon::prelude::*;
use twinsub_core::profile_enum::{twin_profile_count_direct_range, DegreeCap, ExactCount, ProfileStream};
use twinsub_core::tree_lab::{
    monte_carlo_tally, sample_rooted_cayley, trial_chunks, twin_counts_by_size, EstimateWithCI, RandomSource, Tally,
};
use twinsub_core::Result;

/// Pieces per job.
pub const PIECES: usize = 64;

/// Runs `f` on a pool with `threads` workers (0 picks the rayon default).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> std::result::Result<T, String> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
    Ok(pool.install(f))
}

/// `N(k)` by direct summation, split over the profile stream.
pub fn twin_profile_count(k: usize, cap: DegreeCap) -> Result<ExactCount> {
    let mut stream = ProfileStream::new(k, cap)?;
    let parts = stream.partition(PIECES);
    let pieces: Vec<ExactCount> =
        parts.into_par_iter().map(|r| twin_profile_count_direct_range(k, cap, r)).collect::<Result<_>>()?;
    Ok(pieces.into_iter().map(ExactCount::into_inner).sum::<num_bigint::BigUint>().into())
}

pub fn monte_carlo_tally_par(n: usize, k: usize, trials: u64, source: &RandomSource) -> Result<Tally> {
    let tallies: Vec<Tally> = trial_chunks(trials, PIECES)
        .into_par_iter()
        .map(|r| monte_carlo_tally(n, k, source, r))
        .collect::<Result<_>>()?;
    Ok(tallies.into_iter().fold(Tally::default(), Tally::merge))
}

pub fn monte_carlo(n: usize, k: usize, trials: u64, seed: u64) -> Result<EstimateWithCI> {
    let source = RandomSource::new(seed, 0);
    let tally = monte_carlo_tally_par(n, k, trials, &source)?;
    Ok(EstimateWithCI::from_tally(&tally, seed))
}

/// Twin-pair counts by size for each sampled tree in `range`, in trial order.
pub fn twin_counts(n: usize, source: &RandomSource, range: Range<u64>) -> Result<Vec<Vec<(usize, u64)>>> {
    range
        .into_par_iter()
        .map(|t| sample_rooted_cayley(n, &source.substream(t)).map(|tree| twin_counts_by_size(&tree)))
        .collect()
}
