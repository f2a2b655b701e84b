use alloc::format;
use alloc::vec::Vec;

use super::params::{factor_logs, log_prefactor, QuadratureSpec, SaddleParams};
use crate::error::{domain, Error, Result};
use crate::hp::{HpComplex, HpContext, HpReal};
use crate::profile_enum::DegreeCap;

/// Result of the Cauchy-integral evaluation of `ln N(k)`.
#[derive(Clone, Debug)]
pub struct SaddleReport {
    pub log_n: HpReal,
    /// Nodes per axis of the accepted pass.
    pub nodes_per_axis: usize,
    /// `|Im I| / |I|` for the normalized integral `I`.
    pub imag_ratio: f64,
    /// Relative change between the last two passes.
    pub last_change: f64,
    /// Number of factors `H(X_j e^{iθ})` kept in the product.
    pub factors: usize,
}

/// One factor `H(X e^{iθ})/H(X)` as a polynomial in `e^{iθ}` with real
/// coefficients `X^r/((r!)² H(X))`.
struct Factor {
    coeffs: Vec<HpReal>,
    ln_h: HpReal,
}

impl Factor {
    fn new(ctx: &mut HpContext, lx: &HpReal, q: usize) -> Self {
        let x = ctx.exp(lx).with_precision(q);
        let w = libm::sqrt(x.to_f64());
        let mut raw = Vec::new();
        let mut t = HpReal::one(q);
        let mut sum = HpReal::one(q);
        raw.push(t.clone());
        let mut r: u64 = 0;
        loop {
            r += 1;
            t = &t * &x / ((r * r) as f64);
            let Some(e) = t.exponent() else { break };
            raw.push(t.clone());
            sum += &t;
            if r as f64 > w && e < sum.exponent().unwrap_or(0) - q as i64 - 8 {
                break;
            }
        }
        let ln_h = ctx.ln(&sum);
        let inv = sum.recip();
        let coeffs = raw.iter().map(|c| c * &inv).collect();
        Self { coeffs, ln_h }
    }

    /// Values at the `m`-th roots of unity, `ω^n` for `n = 0..m`.
    fn table(&self, roots: &[HpComplex]) -> Vec<HpComplex> {
        roots
            .iter()
            .map(|u| {
                let mut acc = HpComplex::from_real(self.coeffs[self.coeffs.len() - 1].clone());
                for c in self.coeffs.iter().rev().skip(1) {
                    acc = acc.mul_ref(u);
                    acc.re += c;
                }
                acc
            })
            .collect()
    }
}

fn roots_of_unity(ctx: &mut HpContext, m: usize, q: usize) -> Vec<HpComplex> {
    let two_pi = ctx.pi(q) * 2.0;
    (0..m)
        .map(|n| {
            let theta = &two_pi * (n as f64) / (m as f64);
            ctx.cis(&theta)
        })
        .collect()
}

/// `ln N(k)` from the Cauchy coefficient formula on the torus of radii
/// `(x₁, x₂)`, by the periodic trapezoid rule in both angles with node
/// doubling.
///
/// On an `M × M` grid the angle `ξ₁ + jξ₂` of factor `j` is again a multiple
/// of `2π/M`, so each factor is tabulated once per pass and a node costs one
/// complex product per factor.
pub fn saddle_integral_logN(k: usize, cap: DegreeCap, spec: &QuadratureSpec) -> Result<SaddleReport> {
    spec.validate()?;
    if k >= 2 && cap.factor_count().is_some_and(|d| d < 2) {
        return Err(domain(format!("no tree on k={k} vertices has every out-degree below {cap}")));
    }
    let p = spec.precision_bits;
    let q = p + 32;
    let mut ctx = HpContext::new(q)?;
    let s = SaddleParams::new(&mut ctx, k)?;
    let lxs = factor_logs(&mut ctx, &s.ln_x1, &s.ln_x2, cap, 1.0);
    let factors: Vec<Factor> = lxs.iter().map(|lx| Factor::new(&mut ctx, lx, q)).collect();
    let mut log_scale = log_prefactor(&mut ctx, k, &s.ln_x1, &s.ln_x2);
    for f in &factors {
        log_scale += &f.ln_h;
    }

    let mut m = spec.nodes_per_axis;
    let mut prev: Option<HpComplex> = None;
    loop {
        let mean = grid_mean(&mut ctx, &factors, k, m, q);
        if let Some(old) = prev.as_ref() {
            let diff = HpComplex::new(&mean.re - &old.re, &mean.im - &old.im);
            let mag = mean.abs();
            if mag.is_zero() {
                return Err(Error::NoConvergence { what: "saddle quadrature", detail: format!("k={k}: integral vanished at M={m}") });
            }
            let change = (diff.abs() / &mag).to_f64();
            if change <= spec.relative_tolerance {
                if !mean.re.is_positive() {
                    return Err(Error::NoConvergence {
                        what: "saddle quadrature",
                        detail: format!("k={k}: nonpositive real part at M={m}"),
                    });
                }
                let imag_ratio = (mean.im.abs() / &mag).to_f64();
                let log_n = (&log_scale + &ctx.ln(&mean.re)).with_precision(p);
                return Ok(SaddleReport { log_n, nodes_per_axis: m, imag_ratio, last_change: change, factors: factors.len() });
            }
            if 2 * m > spec.max_nodes_per_axis {
                return Err(Error::NoConvergence {
                    what: "saddle quadrature",
                    detail: format!("k={k}: relative change {change:e} at M={m} exceeds {:e}", spec.relative_tolerance),
                });
            }
        }
        prev = Some(mean);
        m *= 2;
    }
}

/// Mean of the normalized integrand over the `m × m` grid.
fn grid_mean(ctx: &mut HpContext, factors: &[Factor], k: usize, m: usize, q: usize) -> HpComplex {
    let roots = roots_of_unity(ctx, m, q);
    let tables: Vec<Vec<HpComplex>> = factors.iter().map(|f| f.table(&roots)).collect();
    // e^{-i(kξ₁ + (k−1)ξ₂)} = ω^{−(k m₁ + (k−1) m₂)}.
    let (kk, k1) = (k % m, (k - 1) % m);
    let mut sum = HpComplex::zero(q);
    for m1 in 0..m {
        for m2 in 0..m {
            let mut v = tables[0][m1].clone();
            for (j, t) in tables.iter().enumerate().skip(1) {
                v = v.mul_ref(&t[(m1 + j * m2) % m]);
            }
            let e = (kk * m1 + k1 * m2) % m;
            v = v.mul_ref(&roots[(m - e) % m]);
            sum = sum.add_ref(&v);
        }
    }
    let n = (m * m) as f64;
    HpComplex::new(&sum.re / n, &sum.im / n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile_enum::twin_profile_count_direct;

    fn rel_err(k: usize, cap: DegreeCap) -> (f64, SaddleReport) {
        let spec = QuadratureSpec::default();
        let rep = saddle_integral_logN(k, cap, &spec).unwrap();
        let mut c = HpContext::new(256).unwrap();
        let exact = c.ln_biguint(twin_profile_count_direct(k, cap).unwrap().value(), 256);
        (((&rep.log_n - &exact) / &exact).abs().to_f64(), rep)
    }

    #[test]
    fn matches_exact_counts() {
        for (k, cap) in [(2, DegreeCap::Unbounded), (5, DegreeCap::Unbounded), (10, DegreeCap::Below(3))] {
            let (e, rep) = rel_err(k, cap);
            assert!(e < 1e-10, "k={k} {cap}: {e:e} {rep:?}");
            assert!(rep.imag_ratio < 1e-10);
        }
    }
}
