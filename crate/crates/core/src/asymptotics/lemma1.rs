use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::bessel::{eval_H, HOptions};
use crate::error::{domain, Result};
use crate::hp::{HpComplex, HpContext, HpReal};

type Key = ((Vec<u64>, i32, bool), (Vec<u64>, i32, bool));

/// Points at which the bound on `|H(z)|` is checked.
#[derive(Clone, Debug)]
pub struct Lemma1Grid {
    pub points: Vec<HpComplex>,
    pub description: String,
}

impl Lemma1Grid {
    /// `radii` log-spaced moduli in `[r_min, r_max]` times `phases` equally
    /// spaced arguments in `(−π, π]`, plus the origin if asked.
    pub fn polar(ctx: &mut HpContext, radii: usize, phases: usize, r_min: f64, r_max: f64, origin: bool) -> Result<Self> {
        if radii == 0 || phases == 0 || !(r_min > 0.0 && r_max >= r_min && r_max.is_finite()) {
            return Err(domain("grid needs positive counts and 0 < r_min <= r_max"));
        }
        let p = ctx.bits();
        let pi = ctx.pi(p);
        // Angle j is π(2j − P)/P for j = 1..=P; negative angles are built as
        // exact conjugates of their mirror images.
        let mut unit = |num: usize| -> HpComplex {
            if 2 * num == phases {
                HpComplex::one(p)
            } else if num == phases {
                HpComplex::from_f64(-1.0, 0.0, p)
            } else {
                ctx.cis(&(&pi * ((2 * num - phases) as f64 / phases as f64)))
            }
        };
        let angles: Vec<HpComplex> = (1..=phases)
            .map(|j| if 2 * j < phases { unit(phases - j).conj() } else { unit(j) })
            .collect();
        let (lo, hi) = (libm::log10(r_min), libm::log10(r_max));
        let mut points = Vec::with_capacity(radii * phases + 1);
        if origin {
            points.push(HpComplex::zero(p));
        }
        for i in 0..radii {
            let e = if radii == 1 { lo } else { lo + (hi - lo) * i as f64 / (radii - 1) as f64 };
            let r = HpReal::from_f64(libm::pow(10.0, e), p);
            points.extend(angles.iter().map(|a| a.scale(&r)));
        }
        let description = format!(
            "{}{radii} log-spaced radii in [{r_min:e}, {r_max:e}] x {phases} phases in (-pi, pi]",
            if origin { "origin + " } else { "" }
        );
        Ok(Self { points, description })
    }
}

/// A grid point where the bound failed.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Lemma1Violation {
    pub re: f64,
    pub im: f64,
    /// `ln` of the ratio of the left side to the right side.
    pub log_ratio: f64,
}

/// Outcome of checking `|H(z)| ≤ |e^{2√z}| / max(1, α|z|^{1/4})`.
#[derive(Clone, Debug)]
pub struct Lemma1Report {
    pub alpha: HpReal,
    /// Largest `α` for which the bound holds at every grid point, i.e. the
    /// infimum of `|e^{2√z}| / (|H(z)| |z|^{1/4})` over nonzero points.
    pub alpha_hat: Option<HpReal>,
    /// The same infimum restricted to `|z| ≥ 1`.
    pub alpha_hat_outer: Option<HpReal>,
    pub grid: String,
    pub points: usize,
    /// Largest left-over-right ratio over the grid; at most 1 on success.
    pub max_ratio: HpReal,
    pub violations: Vec<Lemma1Violation>,
}

impl Lemma1Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the bound with constant `alpha` at every grid point and reports the
/// empirical best constant. Violations are collected, not raised.
pub fn lemma1_validate(ctx: &mut HpContext, grid: &Lemma1Grid, alpha: &HpReal, opts: &HOptions) -> Result<Lemma1Report> {
    if !alpha.is_positive() {
        return Err(domain("alpha must be positive"));
    }
    let p = ctx.bits();
    let ln_alpha = ctx.ln(alpha);
    let slack = libm::exp2(-((p as f64) - 24.0));
    let mut max_log = None::<HpReal>;
    let mut alpha_hat_log = None::<HpReal>;
    let mut outer_log = None::<HpReal>;
    let mut violations = Vec::new();
    // H has real coefficients, so |H(z̄)| = |H(z)|.
    let mut seen: BTreeMap<Key, HpReal> = BTreeMap::new();
    for z in &grid.points {
        let key = (z.re.exact_key(), z.im.abs().exact_key());
        let log_h = match seen.get(&key) {
            Some(v) => v.clone(),
            None => {
                let v = eval_H(ctx, z, opts)?.log_mag;
                seen.insert(key, v.clone());
                v
            }
        };
        let (two_re_w, quarter_ln_mod) = if z.is_zero() {
            (HpReal::zero(p), None)
        } else {
            let w = z.sqrt_principal();
            let lm = ctx.ln(&z.norm_sqr()) / 8.0;
            (&w.re * 2.0, Some(lm))
        };
        // ln(α|z|^{1/4}) clamped at 0.
        let denom = match &quarter_ln_mod {
            Some(q) => {
                let v = &ln_alpha + q;
                if v.is_positive() {
                    v
                } else {
                    HpReal::zero(p)
                }
            }
            None => HpReal::zero(p),
        };
        let log_ratio = &log_h + &denom - &two_re_w;
        if log_ratio.to_f64() > slack {
            let (re, im) = z.to_f64_pair();
            violations.push(Lemma1Violation { re, im, log_ratio: log_ratio.to_f64() });
        }
        if let Some(q) = &quarter_ln_mod {
            let cand = &two_re_w - &log_h - q;
            if !q.is_negative() {
                outer_log = Some(match outer_log {
                    Some(a) => a.min(cand.clone()),
                    None => cand.clone(),
                });
            }
            alpha_hat_log = Some(match alpha_hat_log {
                Some(a) => a.min(cand),
                None => cand,
            });
        }
        max_log = Some(match max_log {
            Some(m) => m.max(log_ratio),
            None => log_ratio,
        });
    }
    let max_ratio = match max_log {
        Some(m) => ctx.exp(&m),
        None => HpReal::zero(p),
    };
    let alpha_hat = alpha_hat_log.map(|a| ctx.exp(&a));
    let alpha_hat_outer = outer_log.map(|a| ctx.exp(&a));
    Ok(Lemma1Report { alpha: alpha.clone(), alpha_hat, alpha_hat_outer, grid: grid.description.clone(), points: grid.points.len(), max_ratio, violations })
}
