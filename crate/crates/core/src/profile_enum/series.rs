//! `N(k)` by coefficient extraction from `∏_j H(x₁x₂ʲ/(j!)²)`.
//!
//! The product is expanded as a truncated bivariate series with exact
//! rational coefficients, one factor at a time. A state `(a, b)` is the
//! exponent pair of `x₁^a x₂^b`; states that can no longer reach
//! `(k, k − 1)` with the remaining factors are dropped as they appear.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Pow, Zero};

use super::counts::{ExactCount, FactorialTable};
use super::profile::DegreeCap;
use crate::error::{domain, Error, Result};

type Q = Ratio<BigUint>;

/// `(k!(k−1)!)² · [x₁^k x₂^{k−1}] ∏_{j<d} H(x₁x₂ʲ/(j!)²)` with
/// `H(z) = Σ z^r/(r!)²`. Must agree with
/// [`twin_profile_count_direct`](super::twin_profile_count_direct).
pub fn twin_profile_count_series(k: usize, cap: DegreeCap) -> Result<ExactCount> {
    if k == 0 {
        return Err(domain("tree size k must be at least 1"));
    }
    let top = cap.max_degree(k);
    if k >= 2 && top == 0 {
        return Ok(ExactCount::default());
    }
    let fact = FactorialTable::new(k);
    let (rows, cols) = (k + 1, k);
    let mut table: Vec<Q> = vec![Q::zero(); rows * cols];
    table[0] = Q::one();

    for j in 0..=top {
        // Term r of the factor: (x₁x₂ʲ)^r / ((j!)^r r!)².
        let max_r = if j == 0 { k } else { (k - 1) / j };
        let weights: Vec<Q> = (0..=max_r)
            .map(|r| {
                let d = Pow::pow(fact.get(j), r) * fact.get(r);
                Q::new(BigUint::one(), &d * &d)
            })
            .collect();
        let mut next: Vec<Q> = vec![Q::zero(); rows * cols];
        for a in 0..=k {
            for b in 0..k {
                let c = &table[a * cols + b];
                if c.is_zero() {
                    continue;
                }
                let mut r = 0;
                while a + r <= k && b + j * r < k && r <= max_r {
                    let (na, nb) = (a + r, b + j * r);
                    if reachable(k, top, j, na, nb) {
                        let slot = &mut next[na * cols + nb];
                        *slot += c * &weights[r];
                    }
                    r += 1;
                }
            }
        }
        table = next;
    }

    let coeff = &table[k * cols + (k - 1)];
    let scale = fact.get(k) * fact.get(k - 1);
    let value = coeff * Q::from_integer(&scale * &scale);
    if !value.denom().is_one() {
        return Err(Error::Invalid {
            what: "series coefficient",
            detail: alloc::format!("(k!(k-1)!)^2 times the coefficient is not an integer for k={k}"),
        });
    }
    Ok(ExactCount(value.to_integer()))
}

/// Whether exponents `(a, b)` reached after the factor for degree `j` can
/// still be completed to `(k, k−1)` using degrees in `(j, top]`.
fn reachable(k: usize, top: usize, j: usize, a: usize, b: usize) -> bool {
    let (c, w) = (k - a, k - 1 - b);
    if j >= top {
        return c == 0 && w == 0;
    }
    c * (j + 1) <= w && w <= c * top
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile_enum::twin_profile_count_direct;

    #[test]
    fn small_values() {
        let s = |k, cap| twin_profile_count_series(k, cap).unwrap();
        assert_eq!(s(1, DegreeCap::Unbounded), 1u64.into());
        assert_eq!(s(2, DegreeCap::Unbounded), 4u64.into());
        assert_eq!(s(3, DegreeCap::Unbounded), 45u64.into());
        assert_eq!(s(3, DegreeCap::Below(2)), 36u64.into());
        assert_eq!(s(3, DegreeCap::Below(1)), 0u64.into());
        assert!(twin_profile_count_series(0, DegreeCap::Unbounded).is_err());
    }

    #[test]
    fn agrees_with_direct_route() {
        for k in 1..=14 {
            for cap in [DegreeCap::Unbounded, DegreeCap::Below(2), DegreeCap::Below(3), DegreeCap::Below(5), DegreeCap::Below(k)] {
                assert_eq!(
                    twin_profile_count_series(k, cap).unwrap(),
                    twin_profile_count_direct(k, cap).unwrap(),
                    "k={k} cap={cap}"
                );
            }
        }
    }
}
