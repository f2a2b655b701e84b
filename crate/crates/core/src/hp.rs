//! Arbitrary-precision real and complex numbers.
//!
//! [`HpReal`] wraps an `astro_float::BigFloat` together with its working
//! precision in bits. Arithmetic operators round to the larger precision of
//! their operands. Transcendental functions need the constants cache held by
//! [`HpContext`], so they live there.
//!
//! The exponent range of the underlying float is about `2^(±2^31)`, so values
//! such as `N(k)` or `H(z)` for `|z| ~ 10^6` never overflow; results that the
//! public API reports are nevertheless carried as natural logarithms
//! ([`LogComplex`]) so callers never have to look at a raw magnitude.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use alloc::string::String;
use alloc::vec::Vec;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign, Word};
use num_bigint::BigUint;

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

/// Smallest accepted working precision.
pub const MIN_PRECISION_BITS: usize = 64;
/// Precision used when the caller does not choose one.
pub const DEFAULT_PRECISION_BITS: usize = 256;

/// An arbitrary-precision real number.
#[derive(Clone)]
pub struct HpReal {
    v: BigFloat,
    p: usize,
}

impl HpReal {
    pub fn zero(p: usize) -> Self {
        Self::from_u64(0, p)
    }

    pub fn one(p: usize) -> Self {
        Self::from_u64(1, p)
    }

    pub fn from_f64(x: f64, p: usize) -> Self {
        Self { v: BigFloat::from_f64(x, p), p }
    }

    pub fn from_u64(x: u64, p: usize) -> Self {
        Self { v: BigFloat::from_u64(x, p), p }
    }

    pub fn from_i64(x: i64, p: usize) -> Self {
        Self { v: BigFloat::from_i64(x, p), p }
    }

    /// Rounds an exact integer to `p` bits.
    pub fn from_biguint(n: &BigUint, p: usize) -> Self {
        let digits = n.to_u64_digits();
        if digits.is_empty() {
            return Self::zero(p);
        }
        let words: Vec<Word> = digits.iter().map(|&d| d as Word).collect();
        let e = (digits.len() * 64) as i32;
        let mut v = BigFloat::from_words(&words, Sign::Pos, e);
        // from_words keeps every bit; bring it to the requested width.
        let _ = v.set_precision(p, RM);
        Self { v, p }
    }

    /// `num / den` rounded to `p` bits.
    pub fn from_ratio(num: &BigUint, den: &BigUint, p: usize) -> Self {
        let wp = p + 64;
        let q = &Self::from_biguint(num, wp) / &Self::from_biguint(den, wp);
        q.with_precision(p)
    }

    pub fn precision(&self) -> usize {
        self.p
    }

    /// Returns a copy rounded (or widened) to `p` bits.
    pub fn with_precision(&self, p: usize) -> Self {
        let mut v = self.v.clone();
        let _ = v.set_precision(p, RM);
        Self { v, p }
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative() && !self.v.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.v.is_positive() && !self.v.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !(self.v.is_nan() || self.v.is_inf())
    }

    pub fn abs(&self) -> Self {
        Self { v: self.v.abs(), p: self.p }
    }

    pub fn sqrt(&self) -> Self {
        Self { v: self.v.sqrt(self.p, RM), p: self.p }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn powi(&self, n: usize) -> Self {
        Self { v: self.v.powi(n, self.p, RM), p: self.p }
    }

    pub fn recip(&self) -> Self {
        Self { v: self.v.reciprocal(self.p, RM), p: self.p }
    }

    pub fn floor(&self) -> Self {
        Self { v: self.v.floor(), p: self.p }
    }

    /// Binary exponent `e` with `2^(e-1) <= |x| < 2^e`; `None` for zero.
    pub fn exponent(&self) -> Option<i64> {
        if self.v.is_zero() {
            return None;
        }
        self.v.exponent().map(i64::from)
    }

    /// Nearest `f64` (truncated mantissa, saturating to ±inf / 0).
    pub fn to_f64(&self) -> f64 {
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf() {
            return if self.v.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        match self.v.as_raw_parts() {
            Some((m, _, sign, e, _)) => {
                let top = m.last().copied().unwrap_or(0) as u64;
                if top == 0 {
                    return 0.0;
                }
                let mag = libm::scalbn(top as f64, (e as i32).saturating_sub(64));
                if sign.is_negative() {
                    -mag
                } else {
                    mag
                }
            }
            None => f64::NAN,
        }
    }

    /// The integer part of a nonnegative value.
    pub fn to_biguint_floor(&self) -> Option<BigUint> {
        if self.is_negative() || !self.is_finite() {
            return None;
        }
        let f = self.floor();
        if f.is_zero() {
            return Some(BigUint::default());
        }
        let (m, _, _, e, _) = f.v.as_raw_parts()?;
        if e <= 0 {
            return Some(BigUint::default());
        }
        let digits: Vec<u64> = m.iter().map(|&w| w as u64).collect();
        let mant = BigUint::from_slice(
            &digits.iter().flat_map(|d| [*d as u32, (*d >> 32) as u32]).collect::<Vec<u32>>(),
        );
        let total_bits = (m.len() * 64) as i64;
        let shift = total_bits - i64::from(e);
        Some(if shift >= 0 { mant >> (shift as usize) } else { mant << ((-shift) as usize) })
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Decimal rendering with every significant digit the precision holds.
    pub fn to_decimal_string(&self, ctx: &mut HpContext) -> String {
        self.v.format(Radix::Dec, RM, &mut ctx.cc).unwrap_or_else(|_| String::from("NaN"))
    }
}

impl HpReal {
    /// Exact identity of the stored value (mantissa words, exponent, sign),
    /// for use as a map key.
    pub fn exact_key(&self) -> (Vec<u64>, i32, bool) {
        if self.v.is_zero() {
            return (Vec::new(), 0, false);
        }
        match self.v.as_raw_parts() {
            Some((m, _, sign, e, _)) => (m.iter().map(|&w| w as u64).collect(), e, sign.is_negative()),
            None => (Vec::new(), i32::MAX, false),
        }
    }
}

impl fmt::Debug for HpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HpReal({:e}; {} bits)", self.to_f64(), self.p)
    }
}

impl fmt::Display for HpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

impl PartialEq for HpReal {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for HpReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $inner:ident, $assign_tr:ident, $assign:ident) => {
        impl $tr<&HpReal> for &HpReal {
            type Output = HpReal;
            fn $method(self, rhs: &HpReal) -> HpReal {
                let p = self.p.max(rhs.p);
                HpReal { v: self.v.$inner(&rhs.v, p, RM), p }
            }
        }
        impl $tr<HpReal> for HpReal {
            type Output = HpReal;
            fn $method(self, rhs: HpReal) -> HpReal {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&HpReal> for HpReal {
            type Output = HpReal;
            fn $method(self, rhs: &HpReal) -> HpReal {
                (&self).$method(rhs)
            }
        }
        impl $tr<HpReal> for &HpReal {
            type Output = HpReal;
            fn $method(self, rhs: HpReal) -> HpReal {
                self.$method(&rhs)
            }
        }
        impl $tr<f64> for &HpReal {
            type Output = HpReal;
            fn $method(self, rhs: f64) -> HpReal {
                self.$method(&HpReal::from_f64(rhs, self.p))
            }
        }
        impl $tr<f64> for HpReal {
            type Output = HpReal;
            fn $method(self, rhs: f64) -> HpReal {
                (&self).$method(rhs)
            }
        }
        impl $assign_tr<&HpReal> for HpReal {
            fn $assign(&mut self, rhs: &HpReal) {
                *self = (&*self).$method(rhs);
            }
        }
        impl $assign_tr<HpReal> for HpReal {
            fn $assign(&mut self, rhs: HpReal) {
                *self = (&*self).$method(&rhs);
            }
        }
    };
}

binop!(Add, add, add, AddAssign, add_assign);
binop!(Sub, sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, mul, MulAssign, mul_assign);

impl Div<&HpReal> for &HpReal {
    type Output = HpReal;
    fn div(self, rhs: &HpReal) -> HpReal {
        let p = self.p.max(rhs.p);
        HpReal { v: self.v.div(&rhs.v, p, RM), p }
    }
}

impl Div<HpReal> for HpReal {
    type Output = HpReal;
    fn div(self, rhs: HpReal) -> HpReal {
        &self / &rhs
    }
}

impl Div<&HpReal> for HpReal {
    type Output = HpReal;
    fn div(self, rhs: &HpReal) -> HpReal {
        &self / rhs
    }
}

impl Div<f64> for &HpReal {
    type Output = HpReal;
    fn div(self, rhs: f64) -> HpReal {
        self / &HpReal::from_f64(rhs, self.p)
    }
}

impl Div<f64> for HpReal {
    type Output = HpReal;
    fn div(self, rhs: f64) -> HpReal {
        &self / rhs
    }
}

impl Neg for HpReal {
    type Output = HpReal;
    fn neg(self) -> HpReal {
        HpReal { v: self.v.neg(), p: self.p }
    }
}

impl Neg for &HpReal {
    type Output = HpReal;
    fn neg(self) -> HpReal {
        HpReal { v: self.v.clone().neg(), p: self.p }
    }
}

/// An arbitrary-precision complex number in rectangular form.
#[derive(Clone, Debug, PartialEq)]
pub struct HpComplex {
    pub re: HpReal,
    pub im: HpReal,
}

impl HpComplex {
    pub fn new(re: HpReal, im: HpReal) -> Self {
        Self { re, im }
    }

    pub fn from_real(re: HpReal) -> Self {
        let p = re.precision();
        Self { re, im: HpReal::zero(p) }
    }

    pub fn from_f64(re: f64, im: f64, p: usize) -> Self {
        Self { re: HpReal::from_f64(re, p), im: HpReal::from_f64(im, p) }
    }

    pub fn zero(p: usize) -> Self {
        Self::from_f64(0.0, 0.0, p)
    }

    pub fn one(p: usize) -> Self {
        Self::from_f64(1.0, 0.0, p)
    }

    pub fn precision(&self) -> usize {
        self.re.precision().max(self.im.precision())
    }

    pub fn with_precision(&self, p: usize) -> Self {
        Self { re: self.re.with_precision(p), im: self.im.with_precision(p) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm_sqr(&self) -> HpReal {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> HpReal {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: &HpReal) -> Self {
        Self { re: &self.re * s, im: &self.im * s }
    }

    pub fn mul_ref(&self, o: &HpComplex) -> HpComplex {
        HpComplex {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn add_ref(&self, o: &HpComplex) -> HpComplex {
        HpComplex { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    pub fn div_ref(&self, o: &HpComplex) -> HpComplex {
        let d = o.norm_sqr();
        HpComplex {
            re: (&self.re * &o.re + &self.im * &o.im) / &d,
            im: (&self.im * &o.re - &self.re * &o.im) / &d,
        }
    }

    /// Principal square root, branch cut along the negative real axis with
    /// `arg(z) = π` mapping to `arg(√z) = π/2`.
    pub fn sqrt_principal(&self) -> HpComplex {
        let r = self.abs();
        let re = ((&r + &self.re) / 2.0).sqrt();
        let mut im = ((&r - &self.re) / 2.0).sqrt();
        if self.im.is_negative() {
            im = -im;
        }
        HpComplex { re, im }
    }

    /// Largest binary exponent of the two parts; a cheap magnitude proxy.
    pub fn exponent(&self) -> Option<i64> {
        match (self.re.exponent(), self.im.exponent()) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

/// A complex value stored as `exp(log_mag + i·phase)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogComplex {
    pub log_mag: HpReal,
    pub phase: HpReal,
}

impl LogComplex {
    pub fn mul_ref(&self, o: &LogComplex) -> LogComplex {
        LogComplex { log_mag: &self.log_mag + &o.log_mag, phase: &self.phase + &o.phase }
    }

    pub fn to_complex(&self, ctx: &mut HpContext) -> HpComplex {
        let m = ctx.exp(&self.log_mag);
        let (s, c) = ctx.sin_cos(&self.phase);
        HpComplex { re: &m * &c, im: &m * &s }
    }
}

/// Working precision plus the constants cache needed by transcendental
/// functions.
pub struct HpContext {
    bits: usize,
    cc: Consts,
}

impl fmt::Debug for HpContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HpContext").field("bits", &self.bits).finish()
    }
}

impl HpContext {
    pub fn new(bits: usize) -> Result<Self> {
        if bits < MIN_PRECISION_BITS {
            return Err(Error::Domain(alloc::format!(
                "precision must be at least {MIN_PRECISION_BITS} bits, got {bits}"
            )));
        }
        let cc = Consts::new().map_err(|e| Error::Precision(alloc::format!("{e:?}")))?;
        Ok(Self { bits, cc })
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn real(&self, x: f64) -> HpReal {
        HpReal::from_f64(x, self.bits)
    }

    pub fn int(&self, x: u64) -> HpReal {
        HpReal::from_u64(x, self.bits)
    }

    /// Parses a decimal literal such as `"0.1"` or `"1e-6"` at the working
    /// precision, rounding once.
    pub fn parse(&mut self, s: &str) -> Result<HpReal> {
        let v = BigFloat::parse(s.trim(), Radix::Dec, self.bits, RM, &mut self.cc);
        if v.is_nan() || v.is_inf() {
            return Err(Error::Invalid { what: "number", detail: alloc::format!("cannot parse {s:?}") });
        }
        Ok(HpReal { v, p: self.bits })
    }

    pub fn pi(&mut self, p: usize) -> HpReal {
        HpReal { v: self.cc.pi(p, RM), p }
    }

    pub fn ln2(&mut self, p: usize) -> HpReal {
        HpReal { v: self.cc.ln_2(p, RM), p }
    }

    pub fn exp(&mut self, x: &HpReal) -> HpReal {
        HpReal { v: x.v.exp(x.p, RM, &mut self.cc), p: x.p }
    }

    pub fn ln(&mut self, x: &HpReal) -> HpReal {
        HpReal { v: x.v.ln(x.p, RM, &mut self.cc), p: x.p }
    }

    pub fn sin(&mut self, x: &HpReal) -> HpReal {
        HpReal { v: x.v.sin(x.p, RM, &mut self.cc), p: x.p }
    }

    pub fn cos(&mut self, x: &HpReal) -> HpReal {
        HpReal { v: x.v.cos(x.p, RM, &mut self.cc), p: x.p }
    }

    pub fn sin_cos(&mut self, x: &HpReal) -> (HpReal, HpReal) {
        (self.sin(x), self.cos(x))
    }

    pub fn atan(&mut self, x: &HpReal) -> HpReal {
        HpReal { v: x.v.atan(x.p, RM, &mut self.cc), p: x.p }
    }

    /// Four-quadrant arctangent in `(-π, π]`.
    pub fn atan2(&mut self, y: &HpReal, x: &HpReal) -> HpReal {
        let p = y.p.max(x.p);
        if x.is_zero() {
            if y.is_zero() {
                return HpReal::zero(p);
            }
            let half_pi = self.pi(p) / 2.0;
            return if y.is_negative() { -half_pi } else { half_pi };
        }
        let base = self.atan(&(y / x));
        if x.is_positive() {
            base
        } else if y.is_negative() {
            base - self.pi(p)
        } else {
            base + self.pi(p)
        }
    }

    /// `ln|z|` and `arg z` of a nonzero complex number.
    pub fn log_complex(&mut self, z: &HpComplex) -> LogComplex {
        let log_mag = self.ln(&z.norm_sqr()) / 2.0;
        let phase = self.atan2(&z.im, &z.re);
        LogComplex { log_mag, phase }
    }

    /// `exp(z)` in rectangular form.
    pub fn exp_complex(&mut self, z: &HpComplex) -> HpComplex {
        let m = self.exp(&z.re);
        let (s, c) = self.sin_cos(&z.im);
        HpComplex { re: &m * &c, im: &m * &s }
    }

    /// `e^{iθ}`.
    pub fn cis(&mut self, theta: &HpReal) -> HpComplex {
        let (s, c) = self.sin_cos(theta);
        HpComplex { re: c, im: s }
    }

    /// `ln n!` at precision `p`, exact up to rounding of the final logarithm.
    pub fn ln_factorial(&mut self, n: u64, p: usize) -> HpReal {
        let f = crate::profile_enum::factorial(n as usize);
        let x = HpReal::from_biguint(&f, p + 32);
        self.ln(&x).with_precision(p)
    }

    /// `ln` of an exact integer at precision `p`.
    pub fn ln_biguint(&mut self, n: &BigUint, p: usize) -> HpReal {
        let x = HpReal::from_biguint(n, p + 32);
        self.ln(&x).with_precision(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_conversion() {
        let a = HpReal::from_f64(1.5, 256);
        let b = HpReal::from_f64(0.25, 256);
        assert_eq!((&a + &b).to_f64(), 1.75);
        assert_eq!((&a - &b).to_f64(), 1.25);
        assert_eq!((&a * &b).to_f64(), 0.375);
        assert_eq!((&a / &b).to_f64(), 6.0);
        assert_eq!((-&a).to_f64(), -1.5);
        assert!(a > b);
        assert_eq!(HpReal::from_f64(-6.5e-3, 128).to_f64(), -6.5e-3);
    }

    #[test]
    fn biguint_round_trip() {
        let n = BigUint::parse_bytes(b"123456789012345678901234567890123456789", 10).unwrap();
        let x = HpReal::from_biguint(&n, 256);
        assert_eq!(x.to_biguint_floor().unwrap(), n);
        let small = BigUint::from(12345u32);
        assert_eq!(HpReal::from_biguint(&small, 128).to_f64(), 12345.0);
        assert_eq!(HpReal::from_f64(7.9, 128).to_biguint_floor().unwrap(), BigUint::from(7u32));
    }

    #[test]
    fn transcendental_sanity() {
        let mut ctx = HpContext::new(256).unwrap();
        let one = ctx.int(1);
        let e = ctx.exp(&one);
        assert!((e.to_f64() - core::f64::consts::E).abs() < 1e-15);
        let l = ctx.ln(&e);
        assert!((&l - &one).abs().to_f64() < 1e-70);
        let pi = ctx.pi(256);
        let t = ctx.atan2(&ctx.real(0.0), &ctx.real(-1.0));
        assert!((&t - &pi).abs().to_f64() < 1e-70);
        let t = ctx.atan2(&ctx.real(-1.0), &ctx.real(-1.0));
        assert!((t.to_f64() + 0.75 * core::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn principal_sqrt_on_the_cut() {
        let z = HpComplex::from_f64(-4.0, 0.0, 128);
        let w = z.sqrt_principal();
        assert_eq!(w.to_f64_pair(), (0.0, 2.0));
        let z = HpComplex::from_f64(0.0, -2.0, 128);
        let (re, im) = z.sqrt_principal().to_f64_pair();
        assert!((re - 1.0).abs() < 1e-15 && (im + 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_tiny_precision() {
        assert!(HpContext::new(32).is_err());
    }
}
