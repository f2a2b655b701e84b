//! Cross-validation suites. Each suite runs a list of checks and hands every
//! result to a callback as soon as it is known.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use twinsub_core::asymptotics::{
    chernoff_bound_logN, chernoff_exp_form_logN, eval_H, eval_H_series, eval_I0_integral, lemma1_validate,
    log_relative_difference, saddle_integral_logN, W_grid_scan, W_hessian_check, HOptions, Lemma1Grid, Lemma1Report,
    QuadratureSpec,
};
use twinsub_core::hp::{HpComplex, HpContext, HpReal};
use twinsub_core::profile_enum::{
    count_trees_with_profile, enumerate_profiles, expected_twin_pairs, twin_profile_count_series, DegreeCap,
};
use twinsub_core::tree_lab::{brute_force_expected, ORACLE_DEFAULT_LIMIT};

use crate::error::{RunError, RunResult};
use crate::parallel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
pub enum Suite {
    #[value(name = "cayley")]
    #[serde(rename = "cayley")]
    Cayley,
    #[value(name = "routes")]
    #[serde(rename = "routes")]
    Routes,
    #[value(name = "oracle")]
    #[serde(rename = "oracle")]
    Oracle,
    #[value(name = "bounds")]
    #[serde(rename = "bounds")]
    Bounds,
    #[value(name = "saddle")]
    #[serde(rename = "saddle")]
    Saddle,
    #[value(name = "lemma1")]
    #[serde(rename = "lemma1")]
    Lemma1,
    #[value(name = "W", alias = "w")]
    #[serde(rename = "W")]
    W,
    #[value(name = "montecarlo")]
    #[serde(rename = "montecarlo")]
    MonteCarlo,
}

/// Knobs shared by the suites; `None` picks the suite default.
#[derive(Clone, Debug)]
pub struct VerifyParams {
    pub kmax: Option<usize>,
    pub nmax: Option<usize>,
    pub n: Option<u64>,
    pub k: Option<usize>,
    pub cap: Option<DegreeCap>,
    pub tol: Option<f64>,
    pub trials: Option<u64>,
    pub seed: u64,
    pub precision_bits: usize,
    pub refine: bool,
}

impl Default for VerifyParams {
    fn default() -> Self {
        Self {
            kmax: None,
            nmax: None,
            n: None,
            k: None,
            cap: None,
            tol: None,
            trials: None,
            seed: 0,
            precision_bits: twinsub_core::hp::DEFAULT_PRECISION_BITS,
            refine: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub op: &'static str,
    pub suite: Suite,
    pub check: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteSummary {
    pub op: &'static str,
    pub suite: Suite,
    pub passed: bool,
    pub checks: usize,
    pub failed: usize,
    pub first_failure: Option<Check>,
}

struct Recorder<'a> {
    suite: Suite,
    emit: &'a mut dyn FnMut(&Check) -> RunResult<()>,
    checks: usize,
    first_failure: Option<Check>,
    failed: usize,
}

impl Recorder<'_> {
    fn record(&mut self, check: String, passed: bool, detail: Value) -> RunResult<()> {
        let c = Check { op: "verify", suite: self.suite, check, passed, detail };
        self.checks += 1;
        if !passed {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(c.clone());
            }
        }
        (self.emit)(&c)
    }
}

fn ctx(bits: usize) -> RunResult<HpContext> {
    Ok(HpContext::new(bits)?)
}

fn cap_name(cap: DegreeCap) -> Value {
    match cap {
        DegreeCap::Unbounded => Value::Null,
        DegreeCap::Below(d) => json!(d),
    }
}

/// Runs `suite`, passing each check to `emit` in a fixed order.
pub fn run_suite(
    suite: Suite,
    params: &VerifyParams,
    emit: &mut dyn FnMut(&Check) -> RunResult<()>,
) -> RunResult<SuiteSummary> {
    let mut rec = Recorder { suite, emit, checks: 0, first_failure: None, failed: 0 };
    match suite {
        Suite::Cayley => cayley(params, &mut rec)?,
        Suite::Routes => routes(params, &mut rec)?,
        Suite::Oracle => oracle(params, &mut rec)?,
        Suite::Bounds => bounds(params, &mut rec)?,
        Suite::Saddle => saddle(params, &mut rec)?,
        Suite::Lemma1 => lemma1(params, &mut rec)?,
        Suite::W => landscape(params, &mut rec)?,
        Suite::MonteCarlo => montecarlo(params, &mut rec)?,
    }
    Ok(SuiteSummary {
        op: "verify",
        suite,
        passed: rec.failed == 0 && rec.checks > 0,
        checks: rec.checks,
        failed: rec.failed,
        first_failure: rec.first_failure,
    })
}

fn cayley(p: &VerifyParams, rec: &mut Recorder) -> RunResult<()> {
    let kmax = p.kmax.unwrap_or(30).max(1);
    let sums: Vec<(BigUint, BigUint)> = (1..=kmax)
        .into_par_iter()
        .map(|k| {
            let total: BigUint =
                enumerate_profiles(k, DegreeCap::Unbounded)?.map(|r| count_trees_with_profile(&r).into_inner()).sum();
            Ok((total, BigUint::from(k).pow(k as u32 - 1)))
        })
        .collect::<twinsub_core::Result<_>>()?;
    for (i, (total, expect)) in sums.into_iter().enumerate() {
        let k = i + 1;
        let passed = total == expect;
        rec.record(format!("k={k}"), passed, json!({"k": k, "sum_M": total.to_string(), "k_pow_k_minus_1": expect.to_string()}))?;
    }
    Ok(())
}

fn routes(p: &VerifyParams, rec: &mut Recorder) -> RunResult<()> {
    let kmax = p.kmax.unwrap_or(40).max(1);
    let caps = match p.cap {
        Some(c) => vec![c],
        None => vec![DegreeCap::Below(2), DegreeCap::Below(3), DegreeCap::Below(5), DegreeCap::Unbounded],
    };
    for k in 1..=kmax {
        for &cap in &caps {
            let direct = parallel::twin_profile_count(k, cap)?;
            let series = twin_profile_count_series(k, cap)?;
            rec.record(
                format!("k={k} cap={cap}"),
                direct == series,
                json!({"k": k, "d_cap": cap_name(cap), "direct": direct.to_string(), "series": series.to_string()}),
            )?;
        }
    }
    Ok(())
}

fn oracle(p: &VerifyParams, rec: &mut Recorder) -> RunResult<()> {
    let nmax = p.nmax.unwrap_or(6);
    if nmax > ORACLE_DEFAULT_LIMIT {
        return Err(RunError::Usage(format!("--nmax must be at most {ORACLE_DEFAULT_LIMIT} for the oracle")));
    }
    let cases: Vec<(usize, usize)> = (3..=nmax).flat_map(|n| (1..=(n - 1) / 2).map(move |k| (n, k))).collect();
    let results: Vec<_> = cases
        .par_iter()
        .map(|&(n, k)| Ok((brute_force_expected(n, k)?, expected_twin_pairs(n as u64, k as u64)?)))
        .collect::<twinsub_core::Result<_>>()?;
    for (&(n, k), (brute, exact)) in cases.iter().zip(results) {
        rec.record(
            format!("n={n} k={k}"),
            brute == exact,
            json!({"n": n, "k": k, "brute_force": brute.to_string(), "formula": exact.to_string()}),
        )?;
    }
    Ok(())
}

/// `ln N(k)` from the exact count at `bits` of precision.
pub fn exact_log_n(c: &mut HpContext, k: usize, cap: DegreeCap) -> RunResult<Option<HpReal>> {
    let n = twin_profile_count_series(k, cap)?;
    if n.is_zero() {
        return Ok(None);
    }
    let bits = c.bits();
    Ok(Some(c.ln_biguint(n.value(), bits)))
}

fn bounds(p: &VerifyParams, rec: &mut Recorder) -> RunResult<()> {
    let kmax = p.kmax.unwrap_or(60).max(2);
    let bits = p.precision_bits;
    let caps = match p.cap {
        Some(c) => vec![c],
        None => vec![DegreeCap::Below(3), DegreeCap::Below(5), DegreeCap::Unbounded],
    };
    let refine_at: Vec<usize> =
        if p.refine { (2..=kmax).collect() } else { [2, 3, 5, 10, 20, 40, 60].into_iter().filter(|&k| k <= kmax).collect() };
    let mut cases = Vec::new();
    for k in 2..=kmax {
        for &cap in &caps {
            cases.push((k, cap, cap == DegreeCap::Unbounded && refine_at.contains(&k)));
        }
    }
    let rows: Vec<(f64, f64, Option<f64>)> = cases
        .par_iter()
        .map(|&(k, cap, refine)| -> RunResult<_> {
            let mut c = ctx(bits)?;
            let exact = exact_log_n(&mut c, k, cap)?.ok_or_else(|| RunError::Usage(format!("N({k}) vanishes under cap {cap}")))?;
            let bound = chernoff_bound_logN(&mut c, k, cap, false)?;
            let refined = if refine { Some(chernoff_bound_logN(&mut c, k, cap, true)?) } else { None };
            Ok(((&bound - &exact).to_f64(), exact.to_f64(), refined.map(|r| (&r - &exact).to_f64())))
        })
        .collect::<RunResult<_>>()?;
    for (&(k, cap, _), (gap, exact, refined_gap)) in cases.iter().zip(rows) {
        rec.record(
            format!("dominance k={k} cap={cap}"),
            gap >= 0.0,
            json!({"k": k, "d_cap": cap_name(cap), "log_N": exact, "bound_minus_log_N": gap}),
        )?;
        if let Some(rg) = refined_gap {
            rec.record(
                format!("refinement k={k} cap={cap}"),
                rg >= 0.0 && rg <= gap,
                json!({"k": k, "d_cap": cap_name(cap), "refined_minus_log_N": rg, "bound_minus_log_N": gap}),
            )?;
        }
    }
    let mut c = ctx(bits)?;
    let v = chernoff_exp_form_logN(&mut c, 2, DegreeCap::Unbounded)?;
    let err = (&v - 6.0).abs().to_f64();
    rec.record("exp-form k=2 equals 6".into(), err <= 5e-12, json!({"k": 2, "log_value": v.to_f64(), "abs_error": err}))
}

fn saddle_cases(p: &VerifyParams) -> Vec<(usize, DegreeCap)> {
    match p.k {
        Some(k) => vec![(k, p.cap.unwrap_or(DegreeCap::Unbounded))],
        None => {
            let mut v: Vec<_> = [2, 5, 10, 20, 40].into_iter().map(|k| (k, DegreeCap::Unbounded)).collect();
            v.push((10, DegreeCap::Below(3)));
            v.push((20, DegreeCap::Below(4)));
            v
        }
    }
}

fn saddle(p: &VerifyParams, rec: &mut Recorder) -> RunResult<()> {
    let tol = p.tol.unwrap_or(1e-6);
    let spec = QuadratureSpec { precision_bits: p.precision_bits, ..QuadratureSpec::default() };
    let cases = saddle_cases(p);
    let rows: Vec<_> = cases
        .par_iter()
        .map(|&(k, cap)| -> RunResult<_> {
            let report = saddle_integral_logN(k, cap, &spec)?;
            let mut c = ctx(p.precision_bits)?;
            let exact = exact_log_n(&mut c, k, cap)?.ok_or_else(|| RunError::Usage(format!("N({k}) vanishes under cap {cap}")))?;
            let rel = ((&report.log_n - &exact).abs() / exact.abs()).to_f64();
            Ok((report, exact.to_f64(), rel))
        })
        .collect::<RunResult<_>>()?;
    for (&(k, cap), (report, exact, rel)) in cases.iter().zip(rows) {
        rec.record(
            format!("k={k} cap={cap}"),
            rel <= tol && report.imag_ratio < 1e-10,
            json!({
                "k": k, "d_cap": cap_name(cap), "log_N": exact, "integral_log_N": report.log_n.to_f64(),
                "relative_error": rel, "tolerance": tol, "imag_ratio": report.imag_ratio,
                "nodes_per_axis": report.nodes_per_axis, "factors": report.factors,
            }),
        )?;
    }
    Ok(())
}

/// Settings of the `lemma1` suite.
#[derive(Clone, Debug)]
pub struct Lemma1Settings {
    pub band_radii: usize,
    pub real_points: usize,
    pub grid_radii: usize,
    pub grid_phases: usize,
    pub grid_r_min: f64,
    pub grid_r_max: f64,
}

impl Default for Lemma1Settings {
    fn default() -> Self {
        Self { band_radii: 17, real_points: 10_000, grid_radii: 100, grid_phases: 100, grid_r_min: 1e-4, grid_r_max: 1e6 }
    }
}

/// Runs [`lemma1_validate`] once with `alpha = 1` to find the empirical
/// constant and then again with `alpha_hat·(1 − 10⁻⁶)`.
pub fn lemma1_two_pass(c: &mut HpContext, grid: &Lemma1Grid, opts: &HOptions) -> RunResult<(Lemma1Report, Lemma1Report)> {
    let bits = c.bits();
    let first = lemma1_validate(c, grid, &HpReal::one(bits), opts)?;
    let alpha_hat =
        first.alpha_hat.clone().ok_or_else(|| RunError::Usage("the grid has no nonzero point".into()))?;
    let second = lemma1_validate(c, grid, &(&alpha_hat * (1.0 - 1e-6)), opts)?;
    Ok((first, second))
}

fn log_spaced(count: usize, lo: f64, hi: f64) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    (0..count).map(|i| if count == 1 { lo } else { 10f64.powf(a + (b - a) * i as f64 / (count - 1) as f64) }).collect()
}

pub fn lemma1_report_json(r: &Lemma1Report) -> Value {
    json!({
        "alpha": r.alpha.to_f64(),
        "alpha_hat": r.alpha_hat.as_ref().map(HpReal::to_f64),
        "alpha_hat_outer": r.alpha_hat_outer.as_ref().map(HpReal::to_f64),
        "grid": r.grid,
        "points": r.points,
        "max_ratio": r.max_ratio.to_f64(),
        "violations": r.violations.len(),
        "first_violations": r.violations.iter().take(5).collect::<Vec<_>>(),
    })
}

fn lemma1(p: &VerifyParams, rec: &mut Recorder) -> RunResult<()> {
    lemma1_with(p, &Lemma1Settings::default(), rec)
}

fn lemma1_with(p: &VerifyParams, s: &Lemma1Settings, rec: &mut Recorder) -> RunResult<()> {
    let bits = p.precision_bits;
    let mut opts = HOptions::for_precision(bits);
    if let Some(t) = p.tol {
        opts.relative_tolerance = t;
    }
    let tol = opts.relative_tolerance;

    // Series against quadrature on the band.
    let quarter = std::f64::consts::FRAC_PI_4;
    let phases: [(i32, &str); 8] =
        [(0, "0"), (1, "pi/4"), (-1, "-pi/4"), (2, "pi/2"), (-2, "-pi/2"), (3, "3pi/4"), (-3, "-3pi/4"), (4, "pi")];
    let mut points = Vec::new();
    for r in log_spaced(s.band_radii, 1e-2, 1e6) {
        for &(m, name) in &phases {
            points.push((r, m, name));
        }
    }
    let diffs: Vec<f64> = points
        .par_iter()
        .map(|&(r, m, _)| -> RunResult<f64> {
            let mut c = ctx(bits)?;
            let (re, im) = match m {
                0 => (r, 0.0),
                4 => (-r, 0.0),
                2 => (0.0, r),
                -2 => (0.0, -r),
                _ => {
                    let a = quarter * m as f64;
                    (r * a.cos(), r * a.sin())
                }
            };
            let z = HpComplex::from_f64(re, im, bits);
            let a = eval_H_series(&mut c, &z)?;
            let w = z.with_precision(bits + 64).sqrt_principal();
            let b = eval_I0_integral(&mut c, &w, &opts)?;
            Ok(log_relative_difference(&mut c, &a, &b))
        })
        .collect::<RunResult<_>>()?;
    let worst_at = (0..diffs.len()).fold(0, |b, i| if diffs[i] > diffs[b] { i } else { b });
    let (wr, _, wname) = points[worst_at];
    rec.record(
        "dual-route band".into(),
        diffs.iter().all(|&d| d <= 10.0 * tol),
        json!({"points": points.len(), "max_relative_difference": diffs[worst_at], "at_modulus": wr, "at_phase": wname, "limit": 10.0 * tol}),
    )?;

    // H(x) ≤ e^{2√x} on the positive axis.
    let xs = log_spaced(s.real_points, 1e-6, 1e8);
    let excess: Vec<f64> = xs
        .par_chunks(256)
        .map(|chunk| -> RunResult<Vec<f64>> {
            let mut c = ctx(bits)?;
            chunk
                .iter()
                .map(|&x| {
                    let z = HpComplex::from_f64(x, 0.0, bits);
                    let h = eval_H(&mut c, &z, &opts)?;
                    let bound = HpReal::from_f64(x, bits).sqrt() * 2.0;
                    Ok((&h.log_mag - &bound).to_f64())
                })
                .collect()
        })
        .collect::<RunResult<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let max_excess = excess.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    rec.record(
        "H(x) <= exp(2 sqrt x)".into(),
        excess.iter().all(|&e| e <= 0.0),
        json!({"points": xs.len(), "range": [1e-6, 1e8], "max_log_H_minus_2_sqrt_x": max_excess}),
    )?;

    // The bound with the empirical constant on a polar grid.
    let mut c = ctx(bits)?;
    let grid = Lemma1Grid::polar(&mut c, s.grid_radii, s.grid_phases, s.grid_r_min, s.grid_r_max, true)?;
    let (first, second) = lemma1_two_pass(&mut c, &grid, &opts)?;
    let mut detail = lemma1_report_json(&second);
    detail["alpha_hat_first_pass"] = json!(first.alpha_hat.as_ref().map(HpReal::to_f64));
    rec.record("lemma1 with alpha_hat*(1-1e-6)".into(), second.passed(), detail)
}

fn landscape(p: &VerifyParams, rec: &mut Recorder) -> RunResult<()> {
    let bits = p.precision_bits;
    let tol = p.tol.unwrap_or(1e-6);
    let cases = [0.25f64, 0.5, 1.0];
    let rows: Vec<_> = cases
        .par_iter()
        .map(|&x2| -> RunResult<_> {
            let mut c = ctx(bits)?;
            let x = HpReal::from_f64(x2, bits);
            let scan = W_grid_scan(&mut c, &x, 401)?;
            let hess = W_hessian_check(&mut c, &x, 1e-5)?;
            Ok((scan, hess))
        })
        .collect::<RunResult<_>>()?;
    for (&x2, (scan, hess)) in cases.iter().zip(rows) {
        rec.record(
            format!("grid max x2={x2}"),
            scan.unique_max_at_origin(),
            json!({
                "x2": x2, "grid": scan.n, "at_origin": scan.at_origin.to_f64(),
                "max_elsewhere": scan.max_elsewhere.to_f64(), "argmax_elsewhere": [scan.argmax_elsewhere.0, scan.argmax_elsewhere.1],
                "max_asymmetry": scan.max_asymmetry.to_f64(),
            }),
        )?;
        rec.record(
            format!("hessian x2={x2}"),
            hess.max_rel_error <= tol && hess.det_rel_error <= tol,
            json!({"x2": x2, "max_rel_error": hess.max_rel_error, "det_rel_error": hess.det_rel_error, "tolerance": tol}),
        )?;
    }
    Ok(())
}

fn montecarlo(p: &VerifyParams, rec: &mut Recorder) -> RunResult<()> {
    let trials = p.trials.unwrap_or(100_000);
    let cases: Vec<(u64, u64)> = match (p.n, p.k) {
        (Some(n), Some(k)) => vec![(n, k as u64)],
        (None, None) => vec![(20, 1), (50, 2), (100, 3)],
        _ => return Err(RunError::Usage("give both --n and --k or neither".into())),
    };
    for (n, k) in cases {
        let exact = expected_twin_pairs(n, k)?;
        let est = parallel::monte_carlo(n as usize, k as usize, trials, p.seed)?;
        let target = exact.to_f64();
        let dev = (est.mean - target).abs();
        rec.record(
            format!("n={n} k={k}"),
            est.covers(target, 5.0),
            json!({
                "n": n, "k": k, "exact": exact.to_string(), "exact_f64": target, "estimate": est,
                "deviation_in_std_errors": (est.std_error > 0.0).then(|| dev / est.std_error),
            }),
        )?;
    }
    Ok(())
}
