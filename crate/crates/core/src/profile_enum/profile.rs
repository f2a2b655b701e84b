use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Counts of vertices by out-degree for a rooted tree on `k` vertices.
///
/// `counts[j]` is the number of vertices with exactly `j` children. A valid
/// profile satisfies `Σ counts = k` and `Σ j·counts[j] = k − 1`, and is
/// stored with trailing zeros trimmed so that structural equality is profile
/// equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DegreeProfile {
    counts: Vec<usize>,
    k: usize,
}

impl DegreeProfile {
    /// Validates and canonicalizes `counts`.
    pub fn new(mut counts: Vec<usize>) -> Result<Self> {
        while counts.last() == Some(&0) {
            counts.pop();
        }
        let k: usize = counts.iter().sum();
        if k == 0 {
            return Err(Error::Invalid { what: "degree profile", detail: "a profile needs at least one vertex".into() });
        }
        let weight: usize = counts.iter().enumerate().map(|(j, &c)| j * c).sum();
        if weight != k - 1 {
            return Err(Error::Invalid {
                what: "degree profile",
                detail: format!("{k} vertices carry {weight} child slots, expected {}", k - 1),
            });
        }
        Ok(Self { counts, k })
    }

    /// Builds a profile the caller has already checked; trims trailing zeros.
    pub(crate) fn from_valid_counts(counts: &[usize]) -> Self {
        let len = counts.iter().rposition(|&c| c > 0).map_or(0, |i| i + 1);
        let counts = counts[..len].to_vec();
        let k = counts.iter().sum();
        debug_assert!(k > 0);
        Self { counts, k }
    }

    /// The profile of a single vertex.
    pub fn leaf() -> Self {
        Self { counts: alloc::vec![1], k: 1 }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Number of vertices.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn leaves(&self) -> usize {
        self.counts[0]
    }

    pub fn max_out_degree(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn fits(&self, cap: DegreeCap) -> bool {
        cap.admits(self.max_out_degree())
    }
}

impl fmt::Debug for DegreeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DegreeProfile{:?}", self.counts)
    }
}

impl fmt::Display for DegreeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Restriction of trees to out-degrees strictly below `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum DegreeCap {
    #[default]
    Unbounded,
    /// Out-degrees `0..d`.
    Below(usize),
}

impl DegreeCap {
    pub fn below(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("degree cap d must be at least 1".into()));
        }
        Ok(Self::Below(d))
    }

    /// Whether a vertex of out-degree `j` is allowed.
    pub fn admits(self, j: usize) -> bool {
        match self {
            Self::Unbounded => true,
            Self::Below(d) => j < d,
        }
    }

    /// Largest usable out-degree in a tree on `k` vertices.
    pub fn max_degree(self, k: usize) -> usize {
        let natural = k.saturating_sub(1);
        match self {
            Self::Unbounded => natural,
            Self::Below(d) => natural.min(d.saturating_sub(1)),
        }
    }

    /// Number of factors `H(x₁x₂ʲ/(j!)²)` in the generating product, or
    /// `None` when the product is infinite.
    pub fn factor_count(self) -> Option<usize> {
        match self {
            Self::Unbounded => None,
            Self::Below(d) => Some(d),
        }
    }
}

impl fmt::Display for DegreeCap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Unbounded => f.write_str("unbounded"),
            Self::Below(d) => write!(f, "d={d}"),
        }
    }
}

#[cfg(feature = "serde")]
mod serde_impls {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    impl Serialize for DegreeProfile {
        fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
            self.counts.serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for DegreeProfile {
        fn deserialize<D: Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
            let counts = Vec::<usize>::deserialize(d)?;
            DegreeProfile::new(counts).map_err(serde::de::Error::custom)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn validates_both_constraints() {
        assert!(DegreeProfile::new(vec![2, 0, 1]).is_ok());
        assert!(DegreeProfile::new(vec![1, 2]).is_ok());
        assert!(DegreeProfile::new(vec![2, 1]).is_err());
        assert!(DegreeProfile::new(vec![]).is_err());
        assert!(DegreeProfile::new(vec![0, 0]).is_err());
    }

    #[test]
    fn trims_trailing_zeros() {
        let p = DegreeProfile::new(vec![1, 1, 0, 0]).unwrap();
        assert_eq!(p.counts(), &[1, 1]);
        assert_eq!(p, DegreeProfile::new(vec![1, 1]).unwrap());
        assert_eq!(p.k(), 2);
        assert_eq!(p.max_out_degree(), 1);
    }

    #[test]
    fn cap_semantics() {
        assert!(DegreeCap::below(0).is_err());
        let cap = DegreeCap::below(2).unwrap();
        assert!(cap.admits(1) && !cap.admits(2));
        assert_eq!(cap.max_degree(5), 1);
        assert_eq!(DegreeCap::Unbounded.max_degree(5), 4);
        assert_eq!(DegreeCap::Unbounded.max_degree(1), 0);
        let p = DegreeProfile::new(vec![2, 0, 1]).unwrap();
        assert!(!p.fits(cap));
        assert!(p.fits(DegreeCap::Unbounded));
    }
}
