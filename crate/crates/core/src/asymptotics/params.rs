use alloc::format;
use alloc::vec::Vec;

use crate::error::{domain, Result};
use crate::hp::{HpContext, HpReal};
use crate::profile_enum::DegreeCap;

/// The saddle point `x₁ = k²e^{−2(k−1)/k}`, `x₂ = ((k−1)/k)²` used as the
/// contour radii for `N(k)`.
#[derive(Clone, Debug)]
pub struct SaddleParams {
    pub k: usize,
    pub x1: HpReal,
    pub x2: HpReal,
    pub ln_x1: HpReal,
    pub ln_x2: HpReal,
}

impl SaddleParams {
    /// Fails for `k < 2`, where `x₂ = 0`.
    pub fn new(ctx: &mut HpContext, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(domain(format!("saddle parameters need k >= 2 (got k={k})")));
        }
        let p = ctx.bits();
        let kk = HpReal::from_u64(k as u64, p);
        let km1 = HpReal::from_u64(k as u64 - 1, p);
        let ln_k = ctx.ln(&kk);
        let ln_x1 = &ln_k * 2.0 - &(&km1 * 2.0 / &kk);
        let ln_x2 = (ctx.ln(&km1) - &ln_k) * 2.0;
        let x1 = ctx.exp(&ln_x1);
        let x2 = (&km1 / &kk).square();
        Ok(Self { k, x1, x2, ln_x1, ln_x2 })
    }
}

/// `ln X_j = ln x₁ + j ln x₂ − 2 ln j!` for the factors that matter: all
/// `j < d` under a cap, otherwise until `X_j^power` drops below `2^{-(p+8)}`
/// and `X_j` keeps decreasing.
pub(crate) fn factor_logs(ctx: &mut HpContext, ln_x1: &HpReal, ln_x2: &HpReal, cap: DegreeCap, power: f64) -> Vec<HpReal> {
    let p = ctx.bits();
    let floor = -((p + 8) as f64) * core::f64::consts::LN_2 / power;
    let limit = cap.factor_count();
    let mut out = Vec::new();
    let mut ln_fact = HpReal::zero(p);
    let mut j = 0usize;
    loop {
        if limit.is_some_and(|d| j >= d) {
            break;
        }
        if j > 0 {
            let jj = HpReal::from_u64(j as u64, p);
            ln_fact += ctx.ln(&jj);
        }
        let lx = ln_x1 + &(ln_x2 * (j as f64)) - &(&ln_fact * 2.0);
        let shrinking = ln_x2.to_f64() < 2.0 * libm::log((j + 1) as f64);
        if limit.is_none() && shrinking && lx.to_f64() < floor {
            break;
        }
        out.push(lx);
        j += 1;
    }
    out
}

/// `2 ln(k!(k−1)!) − k ln x₁ − (k−1) ln x₂`, the part of every bound that
/// does not involve `H`.
pub(crate) fn log_prefactor(ctx: &mut HpContext, k: usize, ln_x1: &HpReal, ln_x2: &HpReal) -> HpReal {
    let p = ctx.bits();
    let lf = ctx.ln_factorial(k as u64, p) + ctx.ln_factorial(k as u64 - 1, p);
    &lf * 2.0 - &(ln_x1 * (k as f64)) - &(ln_x2 * ((k - 1) as f64))
}

/// Settings for the two-dimensional periodic trapezoid rule.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuadratureSpec {
    /// Nodes per axis on the first pass; doubled until convergence.
    pub nodes_per_axis: usize,
    /// Refuse to go beyond this many nodes per axis.
    pub max_nodes_per_axis: usize,
    pub precision_bits: usize,
    /// Stop once two successive passes differ by less than this, relatively.
    pub relative_tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { nodes_per_axis: 16, max_nodes_per_axis: 4096, precision_bits: 256, relative_tolerance: 1e-12 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_axis == 0 || self.nodes_per_axis % 2 != 0 {
            return Err(domain(format!("nodes_per_axis must be positive and even (got {})", self.nodes_per_axis)));
        }
        if self.max_nodes_per_axis < self.nodes_per_axis {
            return Err(domain("max_nodes_per_axis is below nodes_per_axis"));
        }
        if !(self.relative_tolerance > 0.0 && self.relative_tolerance < 1.0) {
            return Err(domain(format!("relative_tolerance must lie in (0, 1) (got {})", self.relative_tolerance)));
        }
        if self.precision_bits < crate::hp::MIN_PRECISION_BITS {
            return Err(domain(format!("precision_bits must be at least {}", crate::hp::MIN_PRECISION_BITS)));
        }
        Ok(())
    }
}
