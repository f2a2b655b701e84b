use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Error, Result};

/// A rooted labeled tree on `{1, …, n}`.
///
/// `parent[v − 1]` is the parent label of `v`, or `0` when `v` is the root.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootedTree {
    n: usize,
    root: usize,
    parent: Vec<usize>,
}

impl RootedTree {
    /// Builds a tree from a parent array, checking that it is connected and
    /// acyclic with the given root.
    pub fn new(root: usize, parent: Vec<usize>) -> Result<Self> {
        let n = parent.len();
        let bad = |detail| Err(Error::Invalid { what: "rooted tree", detail });
        if n == 0 {
            return bad("no vertices".into());
        }
        if root == 0 || root > n {
            return bad(format!("root {root} outside 1..={n}"));
        }
        for (i, &p) in parent.iter().enumerate() {
            let v = i + 1;
            if v == root {
                if p != 0 {
                    return bad(format!("root {root} has parent {p}"));
                }
            } else if p == 0 || p > n || p == v {
                return bad(format!("vertex {v} has invalid parent {p}"));
            }
        }
        // Every vertex must reach the root; mark vertices once their path is known.
        let mut state = vec![0u8; n + 1]; // 0 unknown, 1 on current path, 2 reaches root
        state[root] = 2;
        let mut path = Vec::new();
        for start in 1..=n {
            let mut v = start;
            while state[v] == 0 {
                state[v] = 1;
                path.push(v);
                v = parent[v - 1];
            }
            if state[v] == 1 {
                return bad(format!("cycle through vertex {v}"));
            }
            for u in path.drain(..) {
                state[u] = 2;
            }
        }
        Ok(Self { n, root, parent })
    }

    pub(crate) fn from_parts_unchecked(root: usize, parent: Vec<usize>) -> Self {
        Self { n: parent.len(), root, parent }
    }

    /// The one-vertex tree.
    pub fn singleton() -> Self {
        Self { n: 1, root: 1, parent: vec![0] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Parent of `v`, `None` for the root.
    pub fn parent_of(&self, v: usize) -> Option<usize> {
        match self.parent[v - 1] {
            0 => None,
            p => Some(p),
        }
    }

    pub fn parents(&self) -> &[usize] {
        &self.parent
    }

    /// Out-degree of every vertex, indexed by `label − 1`.
    pub fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for &p in &self.parent {
            if p != 0 {
                deg[p - 1] += 1;
            }
        }
        deg
    }

    /// Children in compressed form: the children of `v` are
    /// `kids[start[v−1]..start[v]]`, in increasing label order.
    pub(crate) fn children(&self) -> (Vec<usize>, Vec<usize>) {
        let n = self.n;
        let mut start = vec![0usize; n + 1];
        for &p in &self.parent {
            if p != 0 {
                start[p] += 1;
            }
        }
        for i in 0..n {
            start[i + 1] += start[i];
        }
        let mut fill = start.clone();
        let mut kids = vec![0usize; n.saturating_sub(1)];
        for (i, &p) in self.parent.iter().enumerate() {
            if p != 0 {
                kids[fill[p - 1]] = i + 1;
                fill[p - 1] += 1;
            }
        }
        (start, kids)
    }

    /// Vertices ordered so that every vertex precedes its parent.
    pub(crate) fn post_order(&self) -> Vec<usize> {
        let (start, kids) = self.children();
        let mut order = Vec::with_capacity(self.n);
        order.push(self.root);
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            order.extend_from_slice(&kids[start[v - 1]..start[v]]);
            i += 1;
        }
        order.reverse();
        order
    }

    /// Decodes a Prüfer sequence over `{1, …, n}` (length `n − 2`) and roots
    /// the resulting tree at `root`.
    pub fn from_prufer(n: usize, seq: &[usize], root: usize) -> Result<Self> {
        if n == 0 {
            return Err(domain("tree needs at least one vertex"));
        }
        if root == 0 || root > n {
            return Err(domain(format!("root {root} outside 1..={n}")));
        }
        if n == 1 {
            return Ok(Self::singleton());
        }
        if seq.len() != n - 2 || seq.iter().any(|&s| s == 0 || s > n) {
            return Err(domain(format!("not a Prüfer sequence for n={n}")));
        }
        let mut parent = prufer_parents(n, seq);
        reroot(&mut parent, root);
        Ok(Self::from_parts_unchecked(root, parent))
    }
}

/// Linear-time Prüfer decoding; the result is rooted at `n`.
pub(crate) fn prufer_parents(n: usize, seq: &[usize]) -> Vec<usize> {
    let mut degree = vec![1usize; n + 1];
    for &s in seq {
        degree[s] += 1;
    }
    let mut parent = vec![0usize; n];
    let mut ptr = 1;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    for &s in seq {
        parent[leaf - 1] = s;
        degree[s] -= 1;
        if s < ptr && degree[s] == 1 {
            leaf = s;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    // Two vertices remain: `leaf` and n.
    if leaf != n {
        parent[leaf - 1] = n;
    }
    parent
}

/// Moves the root to `root` by reversing the path from it to the old root.
pub(crate) fn reroot(parent: &mut [usize], root: usize) {
    let mut prev = 0;
    let mut v = root;
    while v != 0 {
        let next = parent[v - 1];
        parent[v - 1] = prev;
        prev = v;
        v = next;
    }
}

/// A reproducible random stream keyed by `(seed, stream_index)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RandomSource {
    pub seed: u64,
    pub stream_index: u64,
}

impl RandomSource {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        Self { seed, stream_index }
    }

    /// The source for substream `offset` past this one.
    pub fn substream(&self, offset: u64) -> Self {
        Self { seed: self.seed, stream_index: self.stream_index.wrapping_add(offset) }
    }

    /// A fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// A uniform rooted labeled tree on `n` vertices drawn from `source`.
pub fn sample_rooted_cayley(n: usize, source: &RandomSource) -> Result<RootedTree> {
    sample_rooted_cayley_with(n, &mut source.rng())
}

/// [`sample_rooted_cayley`] driven by any generator: a uniform Prüfer
/// sequence followed by a uniform root.
pub fn sample_rooted_cayley_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<RootedTree> {
    if n == 0 {
        return Err(domain("tree needs at least one vertex"));
    }
    if n == 1 {
        return Ok(RootedTree::singleton());
    }
    let m = n as u64;
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..m) as usize + 1).collect();
    let root = rng.gen_range(0..m) as usize + 1;
    let mut parent = prufer_parents(n, &seq);
    reroot(&mut parent, root);
    Ok(RootedTree::from_parts_unchecked(root, parent))
}

#[cfg(feature = "serde")]
mod serde_impls {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        n: usize,
        root: usize,
        parent: Vec<usize>,
    }

    impl Serialize for RootedTree {
        fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
            Repr { n: self.n, root: self.root, parent: self.parent.clone() }.serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for RootedTree {
        fn deserialize<D: Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
            let r = Repr::deserialize(d)?;
            if r.n != r.parent.len() {
                return Err(serde::de::Error::custom("n does not match the parent array length"));
            }
            RootedTree::new(r.root, r.parent).map_err(serde::de::Error::custom)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(RootedTree::new(1, vec![0, 1, 2]).is_ok());
        assert!(RootedTree::new(1, vec![0, 3, 2]).is_err()); // 2 and 3 form a cycle
        assert!(RootedTree::new(2, vec![0, 1]).is_err());
        assert!(RootedTree::new(1, vec![]).is_err());
        assert!(RootedTree::new(1, vec![0, 2]).is_err());
    }

    #[test]
    fn prufer_round_trip_small() {
        // Sequence (4,4) on 4 vertices is the star centered at 4.
        let t = RootedTree::from_prufer(4, &[4, 4], 4).unwrap();
        assert_eq!(t.parents(), &[4, 4, 4, 0]);
        let t = RootedTree::from_prufer(4, &[4, 4], 1).unwrap();
        assert_eq!(t.parents(), &[0, 4, 4, 1]);
        assert!(RootedTree::new(t.root(), t.parents().to_vec()).is_ok());
        // Sequence (2,3) is the path 1-2-3-4.
        let t = RootedTree::from_prufer(4, &[2, 3], 4).unwrap();
        assert_eq!(t.parents(), &[2, 3, 4, 0]);
    }

    #[test]
    fn every_prufer_sequence_gives_a_distinct_tree() {
        let n = 5;
        let mut seen = alloc::collections::BTreeSet::new();
        for code in 0..n * n * n {
            let seq = [code % n + 1, code / n % n + 1, code / (n * n) + 1];
            let t = RootedTree::from_prufer(n, &seq, n).unwrap();
            assert!(RootedTree::new(n, t.parents().to_vec()).is_ok());
            seen.insert(t.parents().to_vec());
        }
        assert_eq!(seen.len(), 125);
    }

    #[test]
    fn sampling_is_reproducible() {
        let s = RandomSource::new(42, 3);
        assert_eq!(sample_rooted_cayley(1, &s).unwrap(), RootedTree::singleton());
        assert_eq!(sample_rooted_cayley(2, &s).unwrap(), sample_rooted_cayley(2, &s).unwrap());
        let a = sample_rooted_cayley(300, &s).unwrap();
        assert_eq!(a, sample_rooted_cayley(300, &s).unwrap());
        assert_ne!(a, sample_rooted_cayley(300, &s.substream(1)).unwrap());
        assert!(RootedTree::new(a.root(), a.parents().to_vec()).is_ok());
        assert!(sample_rooted_cayley(0, &s).is_err());
    }

    #[test]
    fn post_order_puts_children_first() {
        let t = sample_rooted_cayley(200, &RandomSource::new(5, 0)).unwrap();
        let order = t.post_order();
        let mut pos = vec![0usize; t.n() + 1];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        for v in 1..=t.n() {
            if let Some(p) = t.parent_of(v) {
                assert!(pos[v] < pos[p]);
            }
        }
        assert_eq!(*order.last().unwrap(), t.root());
    }
}
