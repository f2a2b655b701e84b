//! Lexicographic enumeration of degree profiles.
//!
//! Profiles of a size-`k` tree are the vectors `r` with `Σ r = k` and
//! `Σ j·r_j = k − 1`; equivalently the out-degrees of the internal vertices
//! form a partition of `k − 1`. The stream visits them in increasing
//! lexicographic order of `(r₀, r₁, …)`. A completion-count table allows
//! jumping straight to any index, so the stream can be split into index
//! ranges and consumed independently.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use super::profile::{DegreeCap, DegreeProfile};
use crate::error::{domain, Result};

/// All profiles of size `k` admitted by a degree cap.
#[derive(Clone, Debug)]
pub struct ProfileStream {
    k: usize,
    cap: DegreeCap,
    /// Largest out-degree that may appear.
    top: usize,
    /// `table[j][c * k + w]`: ways to fill positions `j..=top` with `c`
    /// vertices of total out-degree `w`. Built on first use.
    table: Option<Vec<Vec<u64>>>,
}

impl ProfileStream {
    pub fn new(k: usize, cap: DegreeCap) -> Result<Self> {
        if k == 0 {
            return Err(domain("tree size k must be at least 1"));
        }
        Ok(Self { k, cap, top: cap.max_degree(k), table: None })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn cap(&self) -> DegreeCap {
        self.cap
    }

    /// Number of profiles in the stream.
    pub fn len(&mut self) -> u64 {
        let (k, w) = (self.k, self.k - 1);
        self.completions(0, k, w)
    }

    pub fn is_empty(&mut self) -> bool {
        self.len() == 0
    }

    /// Iterates the whole stream from the beginning.
    pub fn iter(&self) -> ProfileIter {
        ProfileIter { cursor: Cursor::first(self.k, self.top), remaining: u64::MAX }
    }

    /// Iterates the profiles with stream indices in `range`.
    pub fn range(&mut self, range: Range<u64>) -> ProfileIter {
        let len = self.len();
        let end = range.end.min(len);
        if range.start >= end {
            return ProfileIter { cursor: Cursor::exhausted(self.k, self.top), remaining: 0 };
        }
        let cursor = self.unrank(range.start);
        ProfileIter { cursor, remaining: end - range.start }
    }

    /// Splits `0..len` into `parts` contiguous, nearly equal index ranges.
    pub fn partition(&mut self, parts: usize) -> Vec<Range<u64>> {
        let len = self.len();
        let parts = parts.max(1) as u64;
        (0..parts).map(|i| (len * i / parts)..(len * (i + 1) / parts)).collect()
    }

    pub(crate) fn cursor_range(&mut self, range: Range<u64>) -> (Cursor, u64) {
        let it = self.range(range);
        (it.cursor, it.remaining)
    }

    fn completions(&mut self, j: usize, c: usize, w: usize) -> u64 {
        let k = self.k;
        let table = self.table.get_or_insert_with(|| build_table(k, self.top));
        if j > self.top {
            return u64::from(c == 0 && w == 0);
        }
        if c > k || w >= k {
            return 0;
        }
        table[j][c * k + w]
    }

    fn unrank(&mut self, mut idx: u64) -> Cursor {
        let (k, top) = (self.k, self.top);
        let mut counts = vec![0usize; top + 1];
        let (mut c, mut w) = (k, k - 1);
        for j in 0..=top {
            let (lo, hi) = choice_bounds(j, top, c, w);
            let mut chosen = None;
            for r in lo..=hi {
                let n = self.completions(j + 1, c - r, w - j * r);
                if idx < n {
                    chosen = Some(r);
                    break;
                }
                idx -= n;
            }
            let r = chosen.expect("index within stream length");
            counts[j] = r;
            c -= r;
            w -= j * r;
        }
        Cursor::at(counts, k, top)
    }
}

fn build_table(k: usize, top: usize) -> Vec<Vec<u64>> {
    // Layer j counts fillings of positions j..=top; layer top+1 is the empty
    // filling.
    let width = (k + 1) * k;
    let mut layers = vec![vec![0u64; width]; top + 2];
    layers[top + 1][0] = 1;
    for j in (0..=top).rev() {
        let (below, here) = layers.split_at_mut(j + 1);
        let next = &here[0];
        let cur = &mut below[j];
        for c in 0..=k {
            for w in 0..k {
                let mut total = 0u64;
                let mut r = 0;
                while r <= c && j * r <= w {
                    total = total.saturating_add(next[(c - r) * k + (w - j * r)]);
                    r += 1;
                }
                cur[c * k + w] = total;
            }
        }
    }
    layers
}

/// Feasible range for `r_j` when `c` vertices of total out-degree `w` remain
/// to be placed at positions `j..=top`. Empty when `lo > hi`.
fn choice_bounds(j: usize, top: usize, c: usize, w: usize) -> (usize, usize) {
    if j == top {
        return if w == j * c { (c, c) } else { (1, 0) };
    }
    // The remaining c − r vertices take degrees in (j, top].
    let lo = (c * (j + 1)).saturating_sub(w);
    let mut hi = c;
    if j > 0 {
        hi = hi.min(w / j);
    }
    match (c * top).checked_sub(w) {
        Some(slack) => hi = hi.min(slack / (top - j)),
        None => return (1, 0),
    }
    (lo, hi)
}

/// Position in the lexicographic walk, with padded counts.
#[derive(Clone, Debug)]
pub(crate) struct Cursor {
    counts: Vec<usize>,
    k: usize,
    top: usize,
    done: bool,
}

impl Cursor {
    fn first(k: usize, top: usize) -> Self {
        let mut cur = Self { counts: vec![0; top + 1], k, top, done: false };
        if !cur.fill_min_from(0, k, k - 1) {
            cur.done = true;
        }
        cur
    }

    fn exhausted(k: usize, top: usize) -> Self {
        Self { counts: vec![0; top + 1], k, top, done: true }
    }

    fn at(counts: Vec<usize>, k: usize, top: usize) -> Self {
        Self { counts, k, top, done: false }
    }

    /// Padded counts of the current profile.
    pub(crate) fn counts(&self) -> Option<&[usize]> {
        (!self.done).then_some(&self.counts[..])
    }

    /// Lexicographically smallest completion of positions `from..`.
    fn fill_min_from(&mut self, from: usize, mut c: usize, mut w: usize) -> bool {
        for j in from..=self.top {
            let (lo, hi) = choice_bounds(j, self.top, c, w);
            if lo > hi {
                return false;
            }
            self.counts[j] = lo;
            c -= lo;
            w -= j * lo;
        }
        c == 0 && w == 0
    }

    /// Moves to the lexicographic successor.
    pub(crate) fn advance(&mut self) {
        if self.done {
            return;
        }
        let top = self.top;
        // Remaining (vertices, weight) before each position.
        let mut before = Vec::with_capacity(top + 1);
        let (mut c, mut w) = (self.k, self.k - 1);
        for j in 0..=top {
            before.push((c, w));
            c -= self.counts[j];
            w -= j * self.counts[j];
        }
        for j in (0..top).rev() {
            let (c, w) = before[j];
            let (_, hi) = choice_bounds(j, top, c, w);
            let r = self.counts[j] + 1;
            if r <= hi {
                self.counts[j] = r;
                if self.fill_min_from(j + 1, c - r, w - j * r) {
                    return;
                }
            }
        }
        self.done = true;
    }
}

/// Iterator over a contiguous slice of a [`ProfileStream`].
#[derive(Clone, Debug)]
pub struct ProfileIter {
    cursor: Cursor,
    remaining: u64,
}

impl Iterator for ProfileIter {
    type Item = DegreeProfile;

    fn next(&mut self) -> Option<DegreeProfile> {
        if self.remaining == 0 {
            return None;
        }
        let p = DegreeProfile::from_valid_counts(self.cursor.counts()?);
        self.remaining -= 1;
        self.cursor.advance();
        Some(p)
    }
}

/// Every canonical profile of size `k` admitted by `cap`, in lexicographic
/// order of the counts.
pub fn enumerate_profiles(k: usize, cap: DegreeCap) -> Result<ProfileIter> {
    Ok(ProfileStream::new(k, cap)?.iter())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn collect(k: usize, cap: DegreeCap) -> Vec<Vec<usize>> {
        enumerate_profiles(k, cap).unwrap().map(|p| p.counts().to_vec()).collect()
    }

    /// Every integer vector of length `k` with the two sums, by exhaustion.
    fn exhaustive(k: usize, cap: DegreeCap) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let len = k;
        let mut v = vec![0usize; len];
        loop {
            let s: usize = v.iter().sum();
            let ws: usize = v.iter().enumerate().map(|(j, c)| j * c).sum();
            let capped = v.iter().enumerate().all(|(j, &c)| c == 0 || cap.admits(j));
            if s == k && ws == k - 1 && capped {
                let mut t = v.clone();
                while t.last() == Some(&0) {
                    t.pop();
                }
                out.push(t);
            }
            // odometer over 0..=k
            let mut i = 0;
            loop {
                if i == len {
                    out.sort();
                    return out;
                }
                v[i] += 1;
                if v[i] <= k {
                    break;
                }
                v[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn small_cases() {
        assert_eq!(collect(1, DegreeCap::Unbounded), vec![vec![1]]);
        assert_eq!(collect(3, DegreeCap::Unbounded), vec![vec![1, 2], vec![2, 0, 1]]);
        assert_eq!(collect(3, DegreeCap::Below(2)), vec![vec![1, 2]]);
        assert!(collect(3, DegreeCap::Below(1)).is_empty());
        assert_eq!(collect(1, DegreeCap::Below(1)), vec![vec![1]]);
        assert!(enumerate_profiles(0, DegreeCap::Unbounded).is_err());
    }

    #[test]
    fn matches_exhaustive_search() {
        for k in 1..=6 {
            for cap in [DegreeCap::Unbounded, DegreeCap::Below(2), DegreeCap::Below(3), DegreeCap::Below(4)] {
                assert_eq!(collect(k, cap), exhaustive(k, cap), "k={k} cap={cap}");
            }
        }
    }

    #[test]
    fn ranges_reassemble_the_stream() {
        for k in [1usize, 2, 7, 12] {
            for cap in [DegreeCap::Unbounded, DegreeCap::Below(3)] {
                let all = collect(k, cap);
                let mut s = ProfileStream::new(k, cap).unwrap();
                assert_eq!(s.len() as usize, all.len());
                for parts in [1usize, 2, 3, 5, 64] {
                    let glued: Vec<Vec<usize>> = s
                        .partition(parts)
                        .into_iter()
                        .flat_map(|r| s.clone().range(r).map(|p| p.counts().to_vec()).collect::<Vec<_>>())
                        .collect();
                    assert_eq!(glued, all, "k={k} cap={cap} parts={parts}");
                }
                assert_eq!(s.range(3..2).count(), 0);
                assert_eq!(s.range(0..u64::MAX).count(), all.len());
            }
        }
    }
}
