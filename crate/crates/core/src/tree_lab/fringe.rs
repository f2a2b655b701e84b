use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::tree::RootedTree;
use crate::profile_enum::{DegreeProfile, ExactCount};

/// The fringe subtree hanging from one vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FringeRecord {
    pub vertex: usize,
    pub size: usize,
    pub profile: DegreeProfile,
}

/// Size and degree profile of every fringe subtree, in vertex-label order.
pub fn fringe_profiles(t: &RootedTree) -> Vec<FringeRecord> {
    let n = t.n();
    let deg = t.out_degrees();
    let mut counts: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in t.post_order() {
        let mut c = core::mem::take(&mut counts[v - 1]);
        let d = deg[v - 1];
        if c.len() <= d {
            c.resize(d + 1, 0);
        }
        c[d] += 1;
        if let Some(p) = t.parent_of(v) {
            let acc = &mut counts[p - 1];
            if acc.len() < c.len() {
                acc.resize(c.len(), 0);
            }
            for (a, b) in acc.iter_mut().zip(&c) {
                *a += b;
            }
        }
        counts[v - 1] = c;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            let profile = DegreeProfile::from_valid_counts(&c);
            FringeRecord { vertex: i + 1, size: profile.k(), profile }
        })
        .collect()
}

/// Fringe subtree sizes, indexed by `label − 1`.
pub(crate) fn subtree_sizes(t: &RootedTree) -> Vec<usize> {
    let mut size = vec![1usize; t.n()];
    for v in t.post_order() {
        if let Some(p) = t.parent_of(v) {
            size[p - 1] += size[v - 1];
        }
    }
    size
}

fn ordered_pairs<'a>(groups: impl Iterator<Item = &'a usize>) -> u64 {
    groups.map(|&g| (g * (g - 1)) as u64).sum()
}

/// Ordered pairs `(u, v)`, `u ≠ v`, of proper fringe subtrees of size `k`
/// with the same degree profile.
pub fn count_twin_pairs(t: &RootedTree, k: usize) -> ExactCount {
    ExactCount::from(twin_pairs_of_size(t, k))
}

/// [`count_twin_pairs`] as a machine integer. Only the subtrees of size `k`
/// are visited, so the cost is linear in `n`.
pub fn twin_pairs_of_size(t: &RootedTree, k: usize) -> u64 {
    let n = t.n();
    if k == 0 || k >= n {
        return 0;
    }
    let size = subtree_sizes(t);
    let deg = t.out_degrees();
    let (start, kids) = t.children();
    let mut groups: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut stack = Vec::new();
    for v in 1..=n {
        if size[v - 1] != k {
            continue;
        }
        let mut c = vec![0usize; k];
        stack.push(v);
        while let Some(u) = stack.pop() {
            c[deg[u - 1]] += 1;
            stack.extend_from_slice(&kids[start[u - 1]..start[u]]);
        }
        *groups.entry(c).or_insert(0) += 1;
    }
    ordered_pairs(groups.values())
}

/// Ordered twin-pair counts for every size that has any, in increasing size.
pub fn twin_counts_by_size(t: &RootedTree) -> Vec<(usize, u64)> {
    let mut groups: BTreeMap<(usize, DegreeProfile), usize> = BTreeMap::new();
    for r in fringe_profiles(t) {
        if r.vertex != t.root() {
            *groups.entry((r.size, r.profile)).or_insert(0) += 1;
        }
    }
    let mut by_size: BTreeMap<usize, u64> = BTreeMap::new();
    for ((size, _), g) in groups {
        if g >= 2 {
            *by_size.entry(size).or_insert(0) += (g * (g - 1)) as u64;
        }
    }
    by_size.into_iter().collect()
}

/// Largest `k` with a twin pair of size `k`, or 0.
pub fn max_twin_size(t: &RootedTree) -> usize {
    twin_counts_by_size(t).last().map_or(0, |&(k, _)| k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree_lab::{sample_rooted_cayley, RandomSource};

    fn path(n: usize) -> RootedTree {
        RootedTree::new(1, (0..n).collect()).unwrap()
    }

    fn star3() -> RootedTree {
        RootedTree::new(1, vec![0, 1, 1]).unwrap()
    }

    #[test]
    fn hand_examples() {
        let one = fringe_profiles(&RootedTree::singleton());
        assert_eq!(one, vec![FringeRecord { vertex: 1, size: 1, profile: DegreeProfile::leaf() }]);

        let p = fringe_profiles(&path(3));
        assert_eq!(p.iter().map(|r| r.size).collect::<Vec<_>>(), vec![3, 2, 1]);
        assert_eq!(p[1].profile.counts(), &[1, 1]);

        let s = fringe_profiles(&star3());
        assert_eq!((s[1].size, s[1].profile.counts()), (1, &[1][..]));
        assert_eq!((s[2].size, s[2].profile.counts()), (1, &[1][..]));
    }

    #[test]
    fn twin_counts() {
        for k in 1..=5 {
            assert_eq!(count_twin_pairs(&path(5), k), 0u64.into());
        }
        assert_eq!(max_twin_size(&path(5)), 0);
        assert_eq!(count_twin_pairs(&star3(), 1), 2u64.into());
        assert_eq!(max_twin_size(&star3()), 1);
        // Two cherries (a vertex with two leaf children) hung on the path 1-2.
        let t = RootedTree::new(1, vec![0, 1, 1, 3, 3, 2, 2, 2]).unwrap();
        // 2 has children 6,7,8 (size 4); 3 has children 4,5 (size 3): not twins.
        assert_eq!(max_twin_size(&t), 1);
        let t = RootedTree::new(1, vec![0, 1, 2, 3, 3, 2, 6, 6]).unwrap();
        // 3 and 6 each carry two leaves.
        assert_eq!(count_twin_pairs(&t, 3), 2u64.into());
        assert_eq!(max_twin_size(&t), 3);
    }

    #[test]
    fn sum_over_all_trees_on_three_labels() {
        let mut total = 0u64;
        for s in 1..=3 {
            for root in 1..=3 {
                let t = RootedTree::from_prufer(3, &[s], root).unwrap();
                total += twin_pairs_of_size(&t, 1);
            }
        }
        assert_eq!(total, 6);
    }

    #[test]
    fn fringe_consistency_and_evenness() {
        for seed in 0..40 {
            let t = sample_rooted_cayley(60, &RandomSource::new(seed, 0)).unwrap();
            let recs = fringe_profiles(&t);
            let deg = t.out_degrees();
            let (start, kids) = t.children();
            assert_eq!(recs[t.root() - 1].size, t.n());
            for r in &recs {
                assert_eq!(r.size, r.profile.counts().iter().sum::<usize>());
                // Profile = own degree + children's profiles.
                let mut expect = vec![0usize; t.n()];
                expect[deg[r.vertex - 1]] += 1;
                for &c in &kids[start[r.vertex - 1]..start[r.vertex]] {
                    for (j, x) in recs[c - 1].profile.counts().iter().enumerate() {
                        expect[j] += x;
                    }
                }
                while expect.last() == Some(&0) {
                    expect.pop();
                }
                assert_eq!(r.profile.counts(), &expect[..]);
            }
            let by_size = twin_counts_by_size(&t);
            for &(k, c) in &by_size {
                assert_eq!(c % 2, 0);
                assert_eq!(c, twin_pairs_of_size(&t, k));
            }
            for k in 1..=t.n() {
                assert_eq!(twin_pairs_of_size(&t, k) % 2, 0);
            }
        }
    }
}
