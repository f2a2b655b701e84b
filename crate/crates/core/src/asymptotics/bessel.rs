//! `H(z) = Σ z^r/(r!)² = I₀(2√z)` by power series and by quadrature.

use alloc::format;

use crate::error::{domain, Error, Result};
use crate::hp::{HpComplex, HpContext, HpReal, LogComplex};

/// Controls for evaluating `H`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HOptions {
    /// Target relative accuracy of the quadrature route.
    pub relative_tolerance: f64,
    /// The series is used while its cancellation loss stays below this many
    /// times the working precision; the quadrature route takes over beyond.
    pub series_cancellation_factor: f64,
    /// Upper limit on quadrature nodes over `[0, π]`.
    pub max_nodes: usize,
}

impl Default for HOptions {
    fn default() -> Self {
        Self { relative_tolerance: 1e-60, series_cancellation_factor: 8.0, max_nodes: 1 << 16 }
    }
}

impl HOptions {
    /// Defaults with a tolerance a few bits above `bits` of precision.
    pub fn for_precision(bits: usize) -> Self {
        let tol = libm::exp2(-((bits as f64) - 40.0).max(20.0));
        Self { relative_tolerance: tol, ..Self::default() }
    }
}

/// `|√z|` and `Re √z` in double precision, for cost estimates only.
fn root_size(z: &HpComplex) -> Result<(f64, f64)> {
    let (re, im) = z.to_f64_pair();
    let a = libm::hypot(re, im);
    if !a.is_finite() || a > 1e30 {
        return Err(domain(format!("|z| = {a:e} is beyond the supported range")));
    }
    let w = libm::sqrt(a);
    let wr = libm::sqrt(((a + re) / 2.0).max(0.0));
    Ok((w, wr))
}

/// Bits lost to cancellation when summing the series at `z`.
pub fn series_cancellation_bits(z: &HpComplex) -> Result<f64> {
    let (w, wr) = root_size(z)?;
    Ok(2.0 * (w - wr) / core::f64::consts::LN_2)
}

fn log2_ceil(x: f64) -> usize {
    libm::ceil(libm::log2(x.max(1.0))) as usize
}

/// `H(z)` in log-polar form, choosing between the series and the integral
/// route by the expected cancellation.
#[allow(non_snake_case)]
pub fn eval_H(ctx: &mut HpContext, z: &HpComplex, opts: &HOptions) -> Result<LogComplex> {
    let loss = series_cancellation_bits(z)?;
    if loss <= opts.series_cancellation_factor * ctx.bits() as f64 {
        eval_H_series(ctx, z)
    } else {
        let w = z.with_precision(ctx.bits() + 64).sqrt_principal();
        eval_I0_integral(ctx, &w, opts)
    }
}

/// `H(z)` by direct summation, with enough extra precision to absorb the
/// cancellation between terms.
#[allow(non_snake_case)]
pub fn eval_H_series(ctx: &mut HpContext, z: &HpComplex) -> Result<LogComplex> {
    let p = ctx.bits();
    if z.is_zero() {
        return Ok(LogComplex { log_mag: HpReal::zero(p), phase: HpReal::zero(p) });
    }
    let (w, _) = root_size(z)?;
    let loss = series_cancellation_bits(z)?;
    let q = p + libm::ceil(loss) as usize + 2 * log2_ceil(w + 2.0) + 24;
    let s = h_series(z, q);
    if s.is_zero() {
        return Err(Error::Precision(format!("H(z) vanished at {q} bits")));
    }
    let lc = ctx.log_complex(&s.with_precision(p + 16));
    Ok(LogComplex { log_mag: lc.log_mag.with_precision(p), phase: lc.phase.with_precision(p) })
}

/// `Σ z^r/(r!)²` at `q` bits. Summation stops once terms fall `q` bits below
/// the largest term.
pub(crate) fn h_series(z: &HpComplex, q: usize) -> HpComplex {
    let z = z.with_precision(q);
    let mut t = HpComplex::one(q);
    let mut sum = HpComplex::one(q);
    if z.exponent().is_none() {
        return sum;
    }
    let mut peak = 0i64;
    let (zr, zi) = z.to_f64_pair();
    let w = libm::sqrt(libm::hypot(zr, zi));
    let mut r: u64 = 0;
    loop {
        r += 1;
        let d = (r * r) as f64;
        t = t.mul_ref(&z);
        t = HpComplex::new(&t.re / d, &t.im / d);
        sum = sum.add_ref(&t);
        let Some(e) = t.exponent() else { break };
        peak = peak.max(e);
        if r as f64 > w && e < peak - q as i64 - 4 {
            break;
        }
    }
    sum
}

/// `H(x)` for real `x ≥ 0` at `p` bits. All terms are positive.
pub(crate) fn h_series_real(x: &HpReal, p: usize) -> HpReal {
    let q = p + 2 * log2_ceil(libm::sqrt(x.to_f64().max(0.0)) + 2.0) + 16;
    let x = x.with_precision(q);
    let mut t = HpReal::one(q);
    let mut sum = HpReal::one(q);
    if x.is_zero() {
        return sum.with_precision(p);
    }
    let w = libm::sqrt(x.to_f64());
    let sum_exp = |s: &HpReal| s.exponent().unwrap_or(0);
    let mut r: u64 = 0;
    loop {
        r += 1;
        t = &t * &x / ((r * r) as f64);
        sum += &t;
        let Some(e) = t.exponent() else { break };
        if r as f64 > w && e < sum_exp(&sum) - q as i64 - 2 {
            break;
        }
    }
    sum.with_precision(p)
}

/// `I₀(2w) = π⁻¹ ∫₀^π exp(2w cos t) dt` for `Re w ≥ 0`, in log-polar form.
///
/// After factoring out `e^{2w}` the integrand is `exp(−2w(1 − cos t))`,
/// bounded by 1 and smooth and even in `t`, so the trapezoid rule converges
/// geometrically. Nodes are doubled until two successive sums agree to the
/// requested tolerance.
#[allow(non_snake_case)]
pub fn eval_I0_integral(ctx: &mut HpContext, w: &HpComplex, opts: &HOptions) -> Result<LogComplex> {
    if w.re.is_negative() {
        return Err(domain("the integral route needs Re w >= 0"));
    }
    let p = ctx.bits();
    if w.is_zero() {
        return Ok(LogComplex { log_mag: HpReal::zero(p), phase: HpReal::zero(p) });
    }
    let (wr, wi) = w.to_f64_pair();
    let mag = libm::hypot(wr, wi);
    if !mag.is_finite() || mag > 1e15 {
        return Err(domain(format!("|w| = {mag:e} is beyond the supported range")));
    }
    let q = p + 2 * log2_ceil(mag + 2.0) + 24;
    let saved = ctx.bits();
    let mut wctx = HpContext::new(q)?;
    let two_w = HpComplex::new(&w.re.with_precision(q) * 2.0, &w.im.with_precision(q) * 2.0);
    let pi = wctx.pi(q);
    // Nodes whose weight exp(−2 Re w (1 − cos t)) is below this are dropped.
    let cutoff = ((q + 32) as f64) * core::f64::consts::LN_2;

    let node = |m: u64, m_total: u64, ctx: &mut HpContext| -> HpComplex {
        let half = &pi * (m as f64) / ((2 * m_total) as f64);
        let s = ctx.sin(&half);
        let one_minus_cos = &s * &s * 2.0;
        if wr * 2.0 * one_minus_cos.to_f64() > cutoff {
            return HpComplex::zero(q);
        }
        let a = -(&two_w.re * &one_minus_cos);
        let b = -(&two_w.im * &one_minus_cos);
        let m = ctx.exp(&a);
        let (sn, cs) = ctx.sin_cos(&b);
        HpComplex::new(&m * &cs, &m * &sn)
    };

    let mut m_total: u64 = 16;
    let mut acc = HpComplex::zero(q);
    for m in 0..=m_total {
        let mut f = node(m, m_total, &mut wctx);
        if m == 0 || m == m_total {
            f = HpComplex::new(&f.re / 2.0, &f.im / 2.0);
        }
        acc = acc.add_ref(&f);
    }
    let mut prev = HpComplex::new(&acc.re / (m_total as f64), &acc.im / (m_total as f64));
    loop {
        if 2 * m_total > opts.max_nodes as u64 {
            return Err(Error::NoConvergence {
                what: "I0 quadrature",
                detail: format!("w = ({wr:e}, {wi:e}): {m_total} nodes did not reach tolerance {:e}", opts.relative_tolerance),
            });
        }
        let next_total = 2 * m_total;
        for m in (1..next_total).step_by(2) {
            let f = node(m, next_total, &mut wctx);
            acc = acc.add_ref(&f);
        }
        m_total = next_total;
        let cur = HpComplex::new(&acc.re / (m_total as f64), &acc.im / (m_total as f64));
        let diff = HpComplex::new(&cur.re - &prev.re, &cur.im - &prev.im);
        let close = match (diff.exponent(), cur.exponent()) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(_), Some(_)) => (diff.abs() / cur.abs()).to_f64() <= opts.relative_tolerance,
        };
        prev = cur;
        if close && m_total >= 32 {
            break;
        }
    }
    debug_assert_eq!(saved, ctx.bits());
    let lc = wctx.log_complex(&prev);
    let log_mag = (&lc.log_mag + &two_w.re).with_precision(p);
    let phase = reduce_phase(&mut wctx, &(&lc.phase + &two_w.im)).with_precision(p);
    Ok(LogComplex { log_mag, phase })
}

/// Maps an angle into `(−π, π]`.
pub(crate) fn reduce_phase(ctx: &mut HpContext, phase: &HpReal) -> HpReal {
    let p = phase.precision();
    let two_pi = ctx.pi(p + 64) * 2.0;
    let x = phase.with_precision(p + 64);
    let turns = (&x / &two_pi + 0.5).floor();
    let mut y = &x - &(&turns * &two_pi);
    let pi = ctx.pi(p + 64);
    if y <= -&pi {
        y += &two_pi;
    } else if y > pi {
        y -= &two_pi;
    }
    y.with_precision(p)
}

/// `|a/b − 1|` for two values in log-polar form.
pub fn log_relative_difference(ctx: &mut HpContext, a: &LogComplex, b: &LogComplex) -> f64 {
    let dm = (&a.log_mag - &b.log_mag).to_f64();
    let dp = reduce_phase(ctx, &(&a.phase - &b.phase)).to_f64();
    // |e^{dm + i dp} − 1|, accurate for small arguments.
    let em1 = libm::expm1(dm);
    let re = em1 * libm::cos(dp) - 2.0 * libm::sin(dp / 2.0) * libm::sin(dp / 2.0);
    let im = (1.0 + em1) * libm::sin(dp);
    libm::hypot(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> HpContext {
        HpContext::new(256).unwrap()
    }

    // I0(2) = sum 1/(r!)^2, summed independently in f64.
    fn i0_2() -> f64 {
        let mut s = 0.0;
        let mut t = 1.0;
        for r in 1..40 {
            s += t;
            t /= (r * r) as f64;
        }
        s
    }

    #[test]
    fn trivial_points() {
        let mut c = ctx();
        let o = HOptions::for_precision(256);
        let h0 = eval_H(&mut c, &HpComplex::zero(256), &o).unwrap();
        assert!(h0.log_mag.is_zero() && h0.phase.is_zero());
        let i0 = eval_I0_integral(&mut c, &HpComplex::zero(256), &o).unwrap();
        assert!(i0.log_mag.is_zero());
        let h1 = eval_H(&mut c, &HpComplex::one(256), &o).unwrap();
        assert!((h1.log_mag.to_f64() - i0_2().ln()).abs() < 1e-15);
        let q1 = eval_I0_integral(&mut c, &HpComplex::one(256), &o).unwrap();
        assert!(log_relative_difference(&mut c, &h1, &q1) < 1e-60);
        assert!(eval_I0_integral(&mut c, &HpComplex::from_f64(-1.0, 0.0, 256), &o).is_err());
    }

    #[test]
    fn routes_agree_off_axis() {
        let mut c = ctx();
        let o = HOptions::for_precision(256);
        for (r, phi) in [(0.3, 0.4), (25.0, 2.0), (400.0, 3.0), (1e4, -2.9), (1e4, 3.14159)] {
            let z = HpComplex::from_f64(r * libm::cos(phi), r * libm::sin(phi), 256);
            let s = eval_H_series(&mut c, &z).unwrap();
            let w = z.with_precision(320).sqrt_principal();
            let q = eval_I0_integral(&mut c, &w, &o).unwrap();
            let d = log_relative_difference(&mut c, &s, &q);
            assert!(d < 1e-58, "z = {r} e^(i {phi}): {d:e}");
        }
    }

    #[test]
    fn negative_axis_is_bessel_j0() {
        // H(-x^2/4) = J0(x); J0(2.404825557695773) = 0 to double precision.
        let mut c = ctx();
        let x = 2.404825557695773f64;
        let z = HpComplex::from_f64(-x * x / 4.0, 0.0, 256);
        let h = eval_H_series(&mut c, &z).unwrap();
        assert!(h.log_mag.to_f64() < -30.0);
        let z = HpComplex::from_f64(-1.0, 0.0, 256);
        let h = eval_H_series(&mut c, &z).unwrap();
        assert!((libm::exp(h.log_mag.to_f64()) - 0.223_890_779_141_235_7).abs() < 1e-15);
    }

    #[test]
    fn real_series_matches_complex_series() {
        let mut c = ctx();
        for x in [0.0, 1e-6, 1.0, 37.5, 1e5] {
            let a = h_series_real(&HpReal::from_f64(x, 256), 256);
            let b = eval_H_series(&mut c, &HpComplex::from_f64(x, 0.0, 256)).unwrap();
            let la = c.ln(&a);
            assert!((&la - &b.log_mag).abs().to_f64() < 1e-70 * (1.0 + la.to_f64().abs()));
        }
    }
}
