use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Pow, Zero};

use super::profile::{DegreeCap, DegreeProfile};
use super::stream::ProfileStream;
use crate::error::{domain, Result};

/// An exact nonnegative integer.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactCount(pub BigUint);

impl ExactCount {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl From<u64> for ExactCount {
    fn from(v: u64) -> Self {
        Self(BigUint::from(v))
    }
}

impl From<BigUint> for ExactCount {
    fn from(v: BigUint) -> Self {
        Self(v)
    }
}

impl fmt::Display for ExactCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl core::str::FromStr for ExactCount {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        BigUint::parse_bytes(s.as_bytes(), 10)
            .map(Self)
            .ok_or_else(|| crate::Error::Invalid { what: "exact count", detail: format!("not a decimal integer: {s:?}") })
    }
}

/// An exact nonnegative rational in lowest terms with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(Ratio<BigUint>);

impl ExactRational {
    /// Reduces `numer / denom`; fails on a zero denominator.
    pub fn new(numer: BigUint, denom: BigUint) -> Result<Self> {
        if denom.is_zero() {
            return Err(domain("rational with zero denominator"));
        }
        Ok(Self(Ratio::new(numer, denom)))
    }

    pub fn numer(&self) -> &BigUint {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigUint {
        self.0.denom()
    }

    pub fn ratio(&self) -> &Ratio<BigUint> {
        &self.0
    }

    /// Nearest-ish `f64`, good to a few ulps even for huge operands.
    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(self.numer(), self.denom())
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl core::str::FromStr for ExactRational {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || crate::Error::Invalid { what: "exact rational", detail: format!("expected \"p/q\", got {s:?}") };
        let (p, q) = s.split_once('/').ok_or_else(bad)?;
        let p = BigUint::parse_bytes(p.as_bytes(), 10).ok_or_else(bad)?;
        let q = BigUint::parse_bytes(q.as_bytes(), 10).ok_or_else(bad)?;
        Self::new(p, q)
    }
}

pub(crate) fn ratio_to_f64(numer: &BigUint, denom: &BigUint) -> f64 {
    if numer.is_zero() {
        return 0.0;
    }
    // Scale so the integer quotient carries 64+ significant bits.
    let shift = denom.bits() as i64 - numer.bits() as i64 + 70;
    let q = if shift >= 0 { (numer << shift as usize) / denom } else { numer / (denom << (-shift) as usize) };
    let top_bits = q.bits();
    let drop = top_bits.saturating_sub(64);
    let mant = (&q >> drop as usize).iter_u64_digits().next().unwrap_or(0);
    libm::scalbn(mant as f64, (drop as i64 - shift) as i32)
}

/// `n!` as an exact integer.
pub fn factorial(n: usize) -> BigUint {
    (2..=n as u64).fold(BigUint::one(), |acc, i| acc * i)
}

pub(crate) fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Precomputed `0!, 1!, …, n!`.
#[derive(Clone, Debug)]
pub struct FactorialTable(Vec<BigUint>);

impl FactorialTable {
    pub fn new(n: usize) -> Self {
        let mut v = Vec::with_capacity(n + 1);
        v.push(BigUint::one());
        for i in 1..=n {
            let next = &v[i - 1] * i as u64;
            v.push(next);
        }
        Self(v)
    }

    pub fn get(&self, n: usize) -> &BigUint {
        &self.0[n]
    }

    /// `M(r)` for padded counts of a size-`k` profile.
    fn trees_with_counts(&self, counts: &[usize], k: usize) -> BigUint {
        let mut den = BigUint::one();
        for (j, &r) in counts.iter().enumerate() {
            if r == 0 {
                continue;
            }
            if j >= 2 {
                den *= Pow::pow(&self.0[j], r);
            }
            if r >= 2 {
                den *= &self.0[r];
            }
        }
        let num = &self.0[k - 1] * &self.0[k];
        let (q, rem) = num.div_rem(&den);
        debug_assert!(rem.is_zero(), "M(r) must be an integer");
        q
    }
}

/// Number of rooted labeled trees on `k` vertices with degree profile `r`:
/// `(k−1)!/∏(j!)^{r_j} · k!/∏ r_j!`.
pub fn count_trees_with_profile(r: &DegreeProfile) -> ExactCount {
    let table = FactorialTable::new(r.k());
    ExactCount(table.trees_with_counts(r.counts(), r.k()))
}

/// `N(k) = Σ_r M(r)²` over the profiles admitted by `cap`: the number of
/// ordered pairs of rooted trees on two fixed disjoint `k`-sets that share a
/// degree profile.
pub fn twin_profile_count_direct(k: usize, cap: DegreeCap) -> Result<ExactCount> {
    twin_profile_count_direct_range(k, cap, 0..u64::MAX)
}

/// The part of `N(k)` contributed by profiles with stream indices in `range`.
/// Summing the parts of any partition of the stream gives `N(k)` exactly.
pub fn twin_profile_count_direct_range(k: usize, cap: DegreeCap, range: Range<u64>) -> Result<ExactCount> {
    let mut stream = ProfileStream::new(k, cap)?;
    let table = FactorialTable::new(k);
    let (mut cursor, mut remaining) = stream.cursor_range(range);
    let mut sum = BigUint::zero();
    while remaining > 0 {
        let Some(counts) = cursor.counts() else { break };
        let m = table.trees_with_counts(counts, k);
        sum += &m * &m;
        remaining -= 1;
        cursor.advance();
    }
    Ok(ExactCount(sum))
}

fn check_host(n: u64, k: u64) -> Result<()> {
    if k == 0 {
        return Err(domain("tree size k must be at least 1"));
    }
    if n <= 2 * k {
        return Err(domain(format!("n must exceed 2k (got n={n}, k={k})")));
    }
    Ok(())
}

/// `S_n(k) = C(n,k)·C(n−k,k)·N(k)·(n−2k)^{n−2k+1}`, the number of ordered
/// pairs of twin fringe subtrees of size `k` summed over all `n^{n−1}` rooted
/// trees on `[n]`. Requires `n ≥ 2k + 1`.
pub fn host_pair_count(n: u64, k: u64) -> Result<ExactCount> {
    check_host(n, k)?;
    let nk = twin_profile_count_direct(k as usize, DegreeCap::Unbounded)?;
    Ok(host_pair_count_with(n, k, &nk))
}

/// [`host_pair_count`] with `N(k)` supplied by the caller.
pub fn host_pair_count_with(n: u64, k: u64, nk: &ExactCount) -> ExactCount {
    let rest = n - 2 * k;
    let attach = Pow::pow(BigUint::from(rest), (rest + 1) as usize);
    ExactCount(binomial(n, k) * binomial(n - k, k) * &nk.0 * attach)
}

/// `n^{n−1}`, the number of rooted labeled trees on `[n]`.
pub fn rooted_tree_count(n: u64) -> BigUint {
    Pow::pow(BigUint::from(n), n.saturating_sub(1) as usize)
}

/// `m_n(k) = S_n(k)/n^{n−1}`, the expected number of ordered twin pairs of
/// size `k` in a uniform random rooted tree on `[n]`.
pub fn expected_twin_pairs(n: u64, k: u64) -> Result<ExactRational> {
    let s = host_pair_count(n, k)?;
    ExactRational::new(s.0, rooted_tree_count(n))
}

/// Unreduced `"S_n(k)/n^{n−1}"` for reports that want the raw fraction.
pub fn expected_twin_pairs_unreduced(n: u64, k: u64) -> Result<String> {
    let s = host_pair_count(n, k)?;
    Ok(format!("{}/{}", s, rooted_tree_count(n)))
}

#[cfg(feature = "serde")]
mod serde_impls {
    use super::*;
    use alloc::string::{String, ToString};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    impl Serialize for ExactCount {
        fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
            s.serialize_str(&self.to_string())
        }
    }

    impl<'de> Deserialize<'de> for ExactCount {
        fn deserialize<D: Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
            String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
        }
    }

    impl Serialize for ExactRational {
        fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
            s.serialize_str(&self.to_string())
        }
    }

    impl<'de> Deserialize<'de> for ExactRational {
        fn deserialize<D: Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
            String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
        }
    }
}
