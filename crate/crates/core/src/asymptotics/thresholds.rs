use alloc::format;

use num_bigint::BigUint;

use crate::error::{domain, Error, Result};
use crate::hp::{HpContext, HpReal};

/// Base of the logarithms in the thresholds and the degree cap.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum LogBase {
    #[default]
    Natural,
    Two,
    Ten,
}

impl LogBase {
    fn log(self, ctx: &mut HpContext, x: &HpReal) -> HpReal {
        let l = ctx.ln(x);
        match self {
            Self::Natural => l,
            Self::Two => {
                let ln2 = ctx.ln2(x.precision());
                l / ln2
            }
            Self::Ten => {
                let ten = HpReal::from_u64(10, x.precision());
                let ln10 = ctx.ln(&ten);
                l / ln10
            }
        }
    }

    fn log_f64(self, x: f64) -> f64 {
        match self {
            Self::Natural => libm::log(x),
            Self::Two => libm::log2(x),
            Self::Ten => libm::log10(x),
        }
    }
}

/// `(log n, log log n)`, failing unless `log log n > 0`.
fn log_loglog(ctx: &mut HpContext, n: &HpReal, base: LogBase) -> Result<(HpReal, HpReal)> {
    let l = base.log(ctx, n);
    if !l.is_positive() {
        return Err(domain("log n must be positive"));
    }
    let ll = base.log(ctx, &l);
    if !ll.is_positive() {
        return Err(domain("log log n must be positive"));
    }
    Ok((l, ll))
}

/// `⌊2 log k / log log k⌋` with natural logarithms, for `k ≥ 16`.
pub fn default_degree_cap(k: u64) -> Result<usize> {
    default_degree_cap_in(k, LogBase::Natural)
}

/// [`default_degree_cap`] in another base. Values within `1e-9` of an
/// integer are recomputed at 256 bits.
pub fn default_degree_cap_in(k: u64, base: LogBase) -> Result<usize> {
    if k < 16 {
        return Err(domain(format!("the degree cap needs k >= 16 (got k={k})")));
    }
    let l = base.log_f64(k as f64);
    let ll = base.log_f64(l);
    if !(ll > 0.0) {
        return Err(domain("log log k must be positive"));
    }
    let v = 2.0 * l / ll;
    if (v - libm::round(v)).abs() > 1e-9 {
        return Ok(libm::floor(v) as usize);
    }
    let mut ctx = HpContext::new(256)?;
    let kk = HpReal::from_u64(k, 256);
    let (l, ll) = log_loglog(&mut ctx, &kk, base)?;
    let v = (l * 2.0 / ll).floor();
    Ok(v.to_f64() as usize)
}

fn threshold(ctx: &mut HpContext, n: u64, coeff: &HpReal, base: LogBase) -> Result<BigUint> {
    if n < 3 {
        return Err(domain(format!("thresholds need n >= 3 (got n={n})")));
    }
    let p = ctx.bits();
    let nn = HpReal::from_u64(n, p);
    let (l, ll) = log_loglog(ctx, &nn, base)?;
    let e = coeff * &(&l * &ll).sqrt();
    let v = ctx.exp(&e);
    v.to_biguint_floor().ok_or_else(|| Error::Precision("threshold is not a finite number".into()))
}

/// `K_n = ⌊exp((2+δ)√(log n · log log n))⌋`.
pub fn threshold_upper(ctx: &mut HpContext, n: u64, delta: &HpReal) -> Result<BigUint> {
    threshold_upper_in(ctx, n, delta, LogBase::Natural)
}

pub fn threshold_upper_in(ctx: &mut HpContext, n: u64, delta: &HpReal, base: LogBase) -> Result<BigUint> {
    if !delta.is_positive() {
        return Err(domain("delta must be positive"));
    }
    threshold(ctx, n, &(delta + 2.0), base)
}

/// `k_n = ⌊exp((2−δ)√(log n · log log n))⌋` for `0 < δ < 2`.
pub fn threshold_lower(ctx: &mut HpContext, n: u64, delta: &HpReal) -> Result<BigUint> {
    threshold_lower_in(ctx, n, delta, LogBase::Natural)
}

pub fn threshold_lower_in(ctx: &mut HpContext, n: u64, delta: &HpReal, base: LogBase) -> Result<BigUint> {
    let two = HpReal::from_u64(2, delta.precision());
    if !delta.is_positive() || *delta >= two {
        return Err(domain("delta must lie in (0, 2) for the lower threshold"));
    }
    threshold(ctx, n, &(&two - delta), base)
}

/// What an envelope value leaves out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum EnvelopeQualifier {
    /// Exact up to an additive constant in the logarithm.
    UpToAdditiveConstant,
    /// Leading term only; the correction is not quantified.
    LeadingTermOnly,
}

#[derive(Clone, Debug)]
pub struct Envelope {
    pub log_value: HpReal,
    pub qualifier: EnvelopeQualifier,
}

fn ln_k_loglog(ctx: &mut HpContext, k: &BigUint) -> Result<(HpReal, HpReal)> {
    if *k < BigUint::from(16u32) {
        return Err(domain(format!("envelopes need k >= 16 (got k={k})")));
    }
    let p = ctx.bits();
    let lk = ctx.ln_biguint(k, p);
    let llk = ctx.ln(&lk);
    Ok((lk, llk))
}

/// `ln[n²/k³ · exp(−ε(1−ε) ln²k / ln ln k)]`, the part (a) envelope up to an
/// additive constant.
pub fn part_a_envelope_log(ctx: &mut HpContext, n: u64, k: &BigUint, eps2: &HpReal) -> Result<Envelope> {
    let half = HpReal::from_f64(0.5, eps2.precision());
    if !eps2.is_positive() || *eps2 >= half {
        return Err(domain("eps2 must lie in (0, 1/2)"));
    }
    if n == 0 {
        return Err(domain("n must be positive"));
    }
    let (lk, llk) = ln_k_loglog(ctx, k)?;
    let p = ctx.bits();
    let ln_n = ctx.ln(&HpReal::from_u64(n, p));
    let one_minus = HpReal::one(p) - eps2;
    let decay = eps2 * &one_minus * &lk * &lk / &llk;
    let log_value = &ln_n * 2.0 - &(&lk * 3.0) - &decay;
    Ok(Envelope { log_value, qualifier: EnvelopeQualifier::UpToAdditiveConstant })
}

/// `ln[n² exp(−ln²k / (4 ln ln k))]`, the leading term of the part (b)
/// lower estimate.
pub fn part_b_estimate_log(ctx: &mut HpContext, n: u64, k: &BigUint) -> Result<Envelope> {
    if n == 0 {
        return Err(domain("n must be positive"));
    }
    let (lk, llk) = ln_k_loglog(ctx, k)?;
    let p = ctx.bits();
    let ln_n = ctx.ln(&HpReal::from_u64(n, p));
    let log_value = &ln_n * 2.0 - &(&lk * &lk / &(&llk * 4.0));
    Ok(Envelope { log_value, qualifier: EnvelopeQualifier::LeadingTermOnly })
}
