use alloc::vec::Vec;

use crate::error::{domain, Result};
use crate::hp::{HpContext, HpReal};

/// `W(ξ₁, ξ₂) = cos(ξ₁/2 + √x₂ sin(ξ₂/2)) · exp(√x₂ cos(ξ₂/2))`.
pub fn eval_W(ctx: &mut HpContext, xi1: &HpReal, xi2: &HpReal, x2: &HpReal) -> Result<HpReal> {
    if !x2.is_positive() {
        return Err(domain("x2 must be positive"));
    }
    let pi = ctx.pi(ctx.bits() + 8);
    for xi in [xi1, xi2] {
        if xi.abs() > pi {
            return Err(domain("angles must lie in [-pi, pi]"));
        }
    }
    Ok(w_unchecked(ctx, xi1, xi2, &x2.sqrt()))
}

fn w_unchecked(ctx: &mut HpContext, xi1: &HpReal, xi2: &HpReal, s: &HpReal) -> HpReal {
    let (sn, cs) = ctx.sin_cos(&(xi2 / 2.0));
    let a = xi1 / 2.0 + s * &sn;
    ctx.cos(&a) * ctx.exp(&(s * &cs))
}

/// Symmetric 2×2 matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Hessian2 {
    pub d11: HpReal,
    pub d22: HpReal,
    pub d12: HpReal,
}

impl Hessian2 {
    pub fn det(&self) -> HpReal {
        &self.d11 * &self.d22 - &self.d12 * &self.d12
    }
}

/// Second derivatives of `W` at the origin in closed form.
pub fn W_hessian_origin(ctx: &mut HpContext, x2: &HpReal) -> Result<Hessian2> {
    if !x2.is_positive() {
        return Err(domain("x2 must be positive"));
    }
    let s = x2.sqrt();
    let e = ctx.exp(&s) / 4.0;
    Ok(Hessian2 { d11: -e.clone(), d22: -(&(x2 + &s) * &e), d12: -(&s * &e) })
}

/// `√x₂ e^{2√x₂}/16`.
pub fn W_hessian_det_closed_form(ctx: &mut HpContext, x2: &HpReal) -> HpReal {
    let s = x2.sqrt();
    &s * &ctx.exp(&(&s * 2.0)) / 16.0
}

/// Closed-form Hessian against central differences of [`eval_W`].
#[derive(Clone, Debug)]
pub struct HessianCheck {
    pub analytic: Hessian2,
    pub finite_difference: Hessian2,
    /// Largest entrywise relative deviation.
    pub max_rel_error: f64,
    /// Relative deviation of the analytic determinant from `√x₂e^{2√x₂}/16`.
    pub det_rel_error: f64,
}

pub fn W_hessian_check(ctx: &mut HpContext, x2: &HpReal, step: f64) -> Result<HessianCheck> {
    let analytic = W_hessian_origin(ctx, x2)?;
    let p = ctx.bits();
    let s = x2.sqrt();
    let h = HpReal::from_f64(step, p);
    let z = HpReal::zero(p);
    let mh = -h.clone();
    let mut f = |a: &HpReal, b: &HpReal| w_unchecked(ctx, a, b, &s);
    let f00 = f(&z, &z);
    let h2 = &h * &h;
    let d11 = (f(&h, &z) + f(&mh, &z) - &f00 * 2.0) / &h2;
    let d22 = (f(&z, &h) + f(&z, &mh) - &f00 * 2.0) / &h2;
    let d12 = (f(&h, &h) - f(&h, &mh) - f(&mh, &h) + f(&mh, &mh)) / (&h2 * 4.0);
    let fd = Hessian2 { d11, d22, d12 };
    let rel = |a: &HpReal, b: &HpReal| ((a - b) / a).abs().to_f64();
    let max_rel_error = rel(&analytic.d11, &fd.d11).max(rel(&analytic.d22, &fd.d22)).max(rel(&analytic.d12, &fd.d12));
    let det = W_hessian_det_closed_form(ctx, x2);
    let det_rel_error = rel(&det, &analytic.det());
    Ok(HessianCheck { analytic, finite_difference: fd, max_rel_error, det_rel_error })
}

/// Summary of `W` on an `n × n` grid over `[−π, π]²` centered on the origin.
#[derive(Clone, Debug)]
pub struct WScan {
    pub n: usize,
    pub at_origin: HpReal,
    /// Largest value away from the origin.
    pub max_elsewhere: HpReal,
    /// Grid indices of that value.
    pub argmax_elsewhere: (usize, usize),
    /// Largest `|W(ξ) − W(−ξ)|` over the grid.
    pub max_asymmetry: HpReal,
}

impl WScan {
    pub fn unique_max_at_origin(&self) -> bool {
        self.max_elsewhere < self.at_origin
    }
}

/// Evaluates `W` on the grid `ξ = π·(i − c)/c`, `c = (n − 1)/2`, using
/// `cos(a + b) = cos a cos b − sin a sin b` to separate the two angles.
pub fn W_grid_scan(ctx: &mut HpContext, x2: &HpReal, n: usize) -> Result<WScan> {
    if n < 3 || n % 2 == 0 {
        return Err(domain("grid size must be odd and at least 3"));
    }
    if !x2.is_positive() {
        return Err(domain("x2 must be positive"));
    }
    let p = ctx.bits();
    let c = (n - 1) / 2;
    let pi = ctx.pi(p);
    let s = x2.sqrt();
    let xi: Vec<HpReal> = (0..n).map(|i| &pi * ((i as f64 - c as f64) / c as f64)).collect();
    // Rows: ξ₁/2. Columns: √x₂ sin(ξ₂/2) and exp(√x₂ cos(ξ₂/2)).
    let rows: Vec<(HpReal, HpReal)> = xi.iter().map(|x| ctx.sin_cos(&(x / 2.0))).collect();
    let cols: Vec<(HpReal, HpReal, HpReal)> = xi
        .iter()
        .map(|x| {
            let (sn, cs) = ctx.sin_cos(&(x / 2.0));
            let (sb, cb) = ctx.sin_cos(&(&s * &sn));
            (sb, cb, ctx.exp(&(&s * &cs)))
        })
        .collect();
    let mut values = Vec::with_capacity(n * n);
    for (sa, ca) in &rows {
        for (sb, cb, e) in &cols {
            values.push((ca * cb - sa * sb) * e);
        }
    }
    let at_origin = ctx.exp(&s);
    let mut best: Option<(HpReal, (usize, usize))> = None;
    let mut asym = HpReal::zero(p);
    for i in 0..n {
        for j in 0..n {
            let v = &values[i * n + j];
            let mirror = &values[(n - 1 - i) * n + (n - 1 - j)];
            asym = asym.max((v - mirror).abs());
            if i == c && j == c {
                continue;
            }
            if best.as_ref().map_or(true, |(b, _)| v > b) {
                best = Some((v.clone(), (i, j)));
            }
        }
    }
    let (max_elsewhere, argmax_elsewhere) = best.expect("grid has points off the origin");
    Ok(WScan { n, at_origin, max_elsewhere, argmax_elsewhere, max_asymmetry: asym })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_value_and_symmetry() {
        let mut c = HpContext::new(256).unwrap();
        let x2 = HpReal::from_f64(0.5, 256);
        let z = HpReal::zero(256);
        let w0 = eval_W(&mut c, &z, &z, &x2).unwrap();
        assert!((&w0 - &c.exp(&x2.sqrt())).abs().to_f64() < 1e-70);
        let a = HpReal::from_f64(0.7, 256);
        let b = HpReal::from_f64(-2.1, 256);
        let w1 = eval_W(&mut c, &a, &b, &x2).unwrap();
        let w2 = eval_W(&mut c, &-a.clone(), &-b.clone(), &x2).unwrap();
        assert!((&w1 - &w2).abs().to_f64() < 1e-70);
        assert!(eval_W(&mut c, &HpReal::from_f64(3.2, 256), &z, &x2).is_err());
        assert!(eval_W(&mut c, &z, &z, &z).is_err());
    }

    #[test]
    fn hessian_at_one() {
        let mut c = HpContext::new(256).unwrap();
        let one = HpReal::one(256);
        let h = W_hessian_origin(&mut c, &one).unwrap();
        let e = core::f64::consts::E;
        assert!((h.d11.to_f64() + e / 4.0).abs() < 1e-15);
        assert!((h.d22.to_f64() + e / 2.0).abs() < 1e-15);
        assert!((h.d12.to_f64() + e / 4.0).abs() < 1e-15);
        assert!((h.det().to_f64() - e * e / 16.0).abs() < 1e-15);
        let chk = W_hessian_check(&mut c, &one, 1e-12).unwrap();
        assert!(chk.max_rel_error < 1e-20 && chk.det_rel_error < 1e-60, "{chk:?}");
    }

    #[test]
    fn coarse_scan() {
        let mut c = HpContext::new(128).unwrap();
        let s = W_grid_scan(&mut c, &HpReal::from_f64(0.25, 128), 41).unwrap();
        assert!(s.unique_max_at_origin());
        assert!(s.max_asymmetry.to_f64() < 1e-30);
    }
}
