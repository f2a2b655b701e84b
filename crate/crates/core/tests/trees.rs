use std::collections::HashMap;

use twinsub_core::profile_enum::expected_twin_pairs;
use twinsub_core::tree_lab::*;

fn chi_square(n: usize, samples: u64, seed: u64) -> (f64, usize) {
    let mut counts: HashMap<Vec<usize>, u64> = HashMap::new();
    for t in 0..samples {
        let tree = sample_rooted_cayley(n, &RandomSource::new(seed, t)).unwrap();
        *counts.entry(tree.parents().to_vec()).or_insert(0) += 1;
    }
    let cells = (n as u64).pow(n as u32 - 1);
    let expect = samples as f64 / cells as f64;
    let stat = counts.values().map(|&c| (c as f64 - expect).powi(2) / expect).sum::<f64>()
        + (cells as usize - counts.len()) as f64 * expect;
    (stat, counts.len())
}

#[test]
fn sampler_is_uniform_on_three_and_four_vertices() {
    // Upper 1e-6 quantiles of chi-square with 8 and 63 degrees of freedom.
    let (s3, c3) = chi_square(3, 100_000, 1);
    assert_eq!(c3, 9);
    assert!(s3 < 42.700913926544274, "n=3 chi2={s3}");
    let (s4, c4) = chi_square(4, 100_000, 2);
    assert_eq!(c4, 64);
    assert!(s4 < 131.36970205168686, "n=4 chi2={s4}");
}

#[test]
fn single_stream_sampling_is_also_uniform() {
    let mut rng = RandomSource::new(9, 0).rng();
    let mut counts: HashMap<Vec<usize>, u64> = HashMap::new();
    for _ in 0..90_000 {
        let t = sample_rooted_cayley_with(3, &mut rng).unwrap();
        *counts.entry(t.parents().to_vec()).or_insert(0) += 1;
    }
    assert_eq!(counts.len(), 9);
    for &c in counts.values() {
        // 10^4 expected, standard deviation about 94.
        assert!((c as f64 - 10_000.0).abs() < 5.0 * 94.3, "{c}");
    }
}

#[test]
fn oracle_equals_formula() {
    for n in 3..=7u64 {
        for k in 1..=(n - 1) / 2 {
            assert_eq!(brute_force_expected(n as usize, k as usize).unwrap(), expected_twin_pairs(n, k).unwrap(), "n={n} k={k}");
        }
    }
}

#[test]
fn oracle_cost_guard_is_configurable() {
    assert!(brute_force_expected(9, 1).is_err());
    assert!(brute_force_expected_with_limit(5, 1, 4).is_err());
    assert_eq!(brute_force_expected_with_limit(5, 1, 5).unwrap(), brute_force_expected(5, 1).unwrap());
}

#[test]
fn monte_carlo_tracks_exact_mean() {
    for (n, k, seed) in [(3usize, 1usize, 3u64), (20, 1, 4), (50, 2, 5)] {
        let est = monte_carlo_expected(n, k, 20_000, &RandomSource::new(seed, 0)).unwrap();
        let exact = expected_twin_pairs(n as u64, k as u64).unwrap().to_f64();
        assert!(est.covers(exact, 5.0), "n={n} k={k}: {est:?} vs {exact}");
        assert_eq!(est.trials, 20_000);
        assert_eq!(est.seed, seed);
    }
}

#[test]
fn monte_carlo_is_chunking_invariant() {
    let src = RandomSource::new(77, 1000);
    let whole = monte_carlo_expected(30, 2, 3000, &src).unwrap();
    let merged = trial_chunks(3000, 8)
        .into_iter()
        .map(|r| monte_carlo_tally(30, 2, &src, r).unwrap())
        .fold(Tally::default(), Tally::merge);
    assert_eq!(EstimateWithCI::from_tally(&merged, 77), whole);
}

#[test]
fn twin_sizes_of_a_constructed_tree() {
    // Path 1-2-3 with two copies of a three-vertex path hung on 2 and 3.
    let tree = RootedTree::new(1, vec![0, 1, 2, 2, 4, 3, 6]).unwrap();
    // Fringe at 4 is 4-5, at 6 is 6-7: twins of size 2.
    assert_eq!(max_twin_size(&tree), 2);
    let tree = RootedTree::new(1, vec![0, 1, 1, 2, 4, 3, 6, 9, 2, 3]).unwrap();
    // 2 -> {4 -> 5, 9 -> 8} and 3 -> {6 -> 7, 10}: sizes 5 and 4, no twins of those sizes.
    assert!(max_twin_size(&tree) < 4);
    let tree = RootedTree::new(1, vec![0, 1, 2, 2, 1, 5, 5]).unwrap();
    // 2 and 5 each have two leaf children.
    assert_eq!(max_twin_size(&tree), 3);
    assert_eq!(count_twin_pairs(&tree, 3).to_string(), "2");
    let sizes = max_twin_sizes(40, &RandomSource::new(1, 0), 0..20).unwrap();
    assert_eq!(sizes.len(), 20);
}
