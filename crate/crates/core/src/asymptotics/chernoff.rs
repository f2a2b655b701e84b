use alloc::format;

use super::bessel::h_series_real;
use super::params::{factor_logs, log_prefactor, SaddleParams};
use crate::error::{domain, Error, Result};
use crate::hp::{HpContext, HpReal};
use crate::profile_enum::DegreeCap;

/// `ln[(k!(k−1)!)² ∏_j H(X_j) / (x₁^k x₂^{k−1})]` at `x = (e^u, e^v)`.
fn chernoff_objective(ctx: &mut HpContext, k: usize, cap: DegreeCap, u: &HpReal, v: &HpReal) -> HpReal {
    let p = ctx.bits();
    let mut total = log_prefactor(ctx, k, u, v);
    for lx in factor_logs(ctx, u, v, cap, 1.0) {
        let x = ctx.exp(&lx);
        let h = h_series_real(&x, p + 16);
        total += ctx.ln(&h).with_precision(p);
    }
    total
}

/// Log of the Chernoff-type upper bound on `N(k)` under `cap`, evaluated at
/// the saddle parameters. With `refine`, a pattern search over
/// `(ln x₁, ln x₂)` looks for a smaller value of the same bound.
pub fn chernoff_bound_logN(ctx: &mut HpContext, k: usize, cap: DegreeCap, refine: bool) -> Result<HpReal> {
    check_cap(k, cap)?;
    let s = SaddleParams::new(ctx, k)?;
    let base = chernoff_objective(ctx, k, cap, &s.ln_x1, &s.ln_x2);
    if !refine {
        return Ok(base);
    }
    let refined = refine_bound(ctx, k, cap, s.ln_x1, s.ln_x2, base.clone())?;
    Ok(refined.min(base))
}

fn check_cap(k: usize, cap: DegreeCap) -> Result<()> {
    if k >= 2 && cap.factor_count().is_some_and(|d| d < 2) {
        return Err(domain(format!("no tree on k={k} vertices has every out-degree below {cap}")));
    }
    Ok(())
}

/// Coordinate search with geometric step shrinking.
fn refine_bound(
    ctx: &mut HpContext,
    k: usize,
    cap: DegreeCap,
    mut u: HpReal,
    mut v: HpReal,
    mut best: HpReal,
) -> Result<HpReal> {
    const MAX_EVALS: usize = 4000;
    let mut step = 0.25f64;
    let mut evals = 0usize;
    while step > 1e-10 {
        let mut moved = false;
        for axis in 0..2 {
            for dir in [1.0, -1.0] {
                let (nu, nv) = if axis == 0 { (&u + step * dir, v.clone()) } else { (u.clone(), &v + step * dir) };
                let f = chernoff_objective(ctx, k, cap, &nu, &nv);
                evals += 1;
                if f < best {
                    best = f;
                    u = nu;
                    v = nv;
                    moved = true;
                    break;
                }
            }
        }
        if !moved {
            step /= 2.0;
        }
        if evals > MAX_EVALS {
            return Err(Error::NoConvergence { what: "Chernoff refinement", detail: format!("k={k}: {evals} evaluations") });
        }
    }
    Ok(best)
}

/// The bound with every `H(X)` replaced by `e^{2√X}`. At the saddle point
/// and without a cap this is `2 ln(k!(k−1)!) − k ln x₁ − (k−1) ln x₂ + 2k`.
pub fn chernoff_exp_form_logN(ctx: &mut HpContext, k: usize, cap: DegreeCap) -> Result<HpReal> {
    check_cap(k, cap)?;
    let s = SaddleParams::new(ctx, k)?;
    let mut total = log_prefactor(ctx, k, &s.ln_x1, &s.ln_x2);
    for lx in factor_logs(ctx, &s.ln_x1, &s.ln_x2, cap, 0.5) {
        total += ctx.exp(&(&lx / 2.0)) * 2.0;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile_enum::twin_profile_count_direct;

    #[test]
    fn exp_form_at_two_is_six() {
        let mut c = HpContext::new(256).unwrap();
        let v = chernoff_exp_form_logN(&mut c, 2, DegreeCap::Unbounded).unwrap();
        assert!((&v - 6.0).abs().to_f64() < 1e-60, "{v:?}");
        let v = chernoff_exp_form_logN(&mut c, 9, DegreeCap::Unbounded).unwrap();
        let s = SaddleParams::new(&mut c, 9).unwrap();
        let expect = log_prefactor(&mut c, 9, &s.ln_x1, &s.ln_x2) + 18.0;
        assert!((&v - &expect).abs().to_f64() < 1e-60);
    }

    #[test]
    fn dominates_exact_and_refines_downward() {
        let mut c = HpContext::new(128).unwrap();
        for k in [2usize, 3, 7, 15] {
            for cap in [DegreeCap::Unbounded, DegreeCap::Below(3)] {
                let exact = twin_profile_count_direct(k, cap).unwrap();
                let ln_n = c.ln_biguint(exact.value(), 128);
                let plain = chernoff_bound_logN(&mut c, k, cap, false).unwrap();
                let fine = chernoff_bound_logN(&mut c, k, cap, true).unwrap();
                assert!(plain >= ln_n && fine >= ln_n && fine <= plain, "k={k} {cap}");
                let weak = chernoff_exp_form_logN(&mut c, k, cap).unwrap();
                assert!(weak >= plain);
            }
        }
        assert!(chernoff_bound_logN(&mut c, 1, DegreeCap::Unbounded, false).is_err());
        assert!(chernoff_bound_logN(&mut c, 4, DegreeCap::Below(1), false).is_err());
    }
}
