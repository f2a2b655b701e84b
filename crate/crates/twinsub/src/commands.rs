//! The subcommands. Each writes its records to a [`Sink`] and returns the
//! process exit code.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};
use twinsub_core::asymptotics::{
    chernoff_bound_logN, chernoff_exp_form_logN, lemma1_validate, part_a_envelope_log, part_b_estimate_log,
    saddle_integral_logN, threshold_lower, threshold_upper, EnvelopeQualifier, HOptions, Lemma1Grid, QuadratureSpec,
};
use twinsub_core::hp::{HpContext, HpReal};
use twinsub_core::profile_enum::{
    enumerate_profiles, count_trees_with_profile, host_pair_count_with, rooted_tree_count, expected_twin_pairs,
    ExactRational,
};
use twinsub_core::tree_lab::{EstimateWithCI, RandomSource, Tally};
use twinsub_core::Error;

use crate::cli::{Cli, Command, Report, RunConfig};
use crate::error::{RunError, RunResult};
use crate::output::Sink;
use crate::parallel;
use crate::verify::{exact_log_n, lemma1_report_json, lemma1_two_pass, run_suite, VerifyParams};

/// Largest `k` for which `bound` and `integral` also report the exact value.
const EXACT_COMPARE_KMAX: usize = 80;

/// Parses `args` (including the program name), runs the command and
/// returns the exit code. Errors are written to `out` as a JSON object.
pub fn run<I, T>(args: I, env_precision: Option<&str>, out: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return 0;
            }
            return fail(out, &RunError::Usage(e.render().to_string().trim_end().to_string()));
        }
    };
    let result = RunConfig::resolve(cli, env_precision).and_then(|cfg| {
        parallel::with_threads(cfg.threads, || {
            let mut sink = Sink::new(cfg.output_format, &mut *out);
            let code = dispatch(&cfg, &mut sink)?;
            sink.flush()?;
            Ok(code)
        })
        .map_err(RunError::Usage)?
    });
    match result {
        Ok(code) => code,
        Err(e) => fail(out, &e),
    }
}

fn fail(out: &mut (dyn Write + Send), e: &RunError) -> i32 {
    let _ = serde_json::to_writer(&mut *out, &e.report());
    let _ = out.write_all(b"\n");
    let _ = out.flush();
    e.exit_code()
}

pub fn dispatch(cfg: &RunConfig, sink: &mut Sink) -> RunResult<i32> {
    match &cfg.command {
        Command::Exact { no_table } => exact(cfg, *no_table, sink),
        Command::Verify { suite } => {
            let params = verify_params(cfg)?;
            let summary = run_suite(*suite, &params, &mut |c| Ok(sink.emit(c)?))?;
            sink.emit(&summary)?;
            Ok(if summary.passed { 0 } else { 1 })
        }
        Command::Thresholds => thresholds(cfg, sink),
        Command::Bound => bound(cfg, sink),
        Command::Integral => integral(cfg, sink),
        Command::Sample => sample(cfg, sink),
        Command::Lemma1 { radii, phases, r_min, r_max, alpha } => lemma1(cfg, *radii, *phases, *r_min, *r_max, *alpha, sink),
    }
}

fn verify_params(cfg: &RunConfig) -> RunResult<VerifyParams> {
    Ok(VerifyParams {
        kmax: cfg.kmax,
        nmax: cfg.nmax,
        n: cfg.single_n()?,
        k: cfg.k,
        cap: cfg.d_cap.map(twinsub_core::profile_enum::DegreeCap::Below),
        tol: cfg.tolerance,
        trials: cfg.trials,
        seed: cfg.seed,
        precision_bits: cfg.precision_bits,
        refine: cfg.refine,
    })
}

fn inputs(cfg: &RunConfig) -> Value {
    let mut m = serde_json::Map::new();
    if let Ok(Some(n)) = cfg.single_n() {
        m.insert("n".into(), json!(n));
    }
    m.insert("k".into(), json!(cfg.k));
    m.insert("d_cap".into(), json!(cfg.d_cap));
    Value::Object(m)
}

#[derive(Serialize)]
struct ProfileRow<'a> {
    op: &'static str,
    k: usize,
    profile: &'a [usize],
    #[serde(rename = "M")]
    m: String,
}

fn exact(cfg: &RunConfig, no_table: bool, sink: &mut Sink) -> RunResult<i32> {
    let k = cfg.need_k()?;
    let cap = cfg.cap();
    let n = cfg.single_n()?;
    if let Some(n) = n {
        if n <= 2 * k as u64 {
            return Err(Error::Domain(format!("n must exceed 2k (got n={n}, k={k})")).into());
        }
    }
    let mut profiles = 0u64;
    for r in enumerate_profiles(k, cap)? {
        profiles += 1;
        if !no_table {
            let m = count_trees_with_profile(&r).to_string();
            sink.emit(&ProfileRow { op: "exact", k, profile: r.counts(), m })?;
        }
    }
    let nk = parallel::twin_profile_count(k, cap)?;
    let mut rec = json!({"op": "exact", "inputs": inputs(cfg), "profiles": profiles, "N": nk.to_string()});
    if let Some(n) = n {
        let s = host_pair_count_with(n, k as u64, &nk);
        let total = rooted_tree_count(n);
        let m = ExactRational::new(s.value().clone(), total.clone())?;
        rec["S"] = json!(s.to_string());
        rec["m"] = json!(m.to_string());
        rec["m_ratio"] = json!(format!("{s}/{total}"));
        rec["m_f64"] = json!(m.to_f64());
    }
    sink.emit(&rec)?;
    Ok(0)
}

/// One line of the threshold table.
#[derive(Clone, Debug, Serialize)]
pub struct ThresholdRow {
    pub op: &'static str,
    pub n: u64,
    pub delta: String,
    #[serde(rename = "K_n")]
    pub upper: String,
    #[serde(rename = "k_n")]
    pub lower: String,
    pub part_a_log: f64,
    pub part_a_qualifier: EnvelopeQualifier,
    pub part_b_log: f64,
    pub part_b_qualifier: EnvelopeQualifier,
    pub eps2: String,
    pub precision_bits: usize,
}

/// `K_n`, `k_n` and the envelopes at them for each `n`.
pub fn threshold_rows(bits: usize, ns: &[u64], delta: &str, eps2: &str) -> RunResult<Vec<ThresholdRow>> {
    let mut c = HpContext::new(bits)?;
    let d = c.parse(delta)?;
    let e = c.parse(eps2)?;
    ns.iter()
        .map(|&n| {
            let upper: BigUint = threshold_upper(&mut c, n, &d)?;
            let lower: BigUint = threshold_lower(&mut c, n, &d)?;
            let a = part_a_envelope_log(&mut c, n, &upper, &e)?;
            let b = part_b_estimate_log(&mut c, n, &lower)?;
            Ok(ThresholdRow {
                op: "thresholds",
                n,
                delta: delta.to_string(),
                upper: upper.to_string(),
                lower: lower.to_string(),
                part_a_log: a.log_value.to_f64(),
                part_a_qualifier: a.qualifier,
                part_b_log: b.log_value.to_f64(),
                part_b_qualifier: b.qualifier,
                eps2: eps2.to_string(),
                precision_bits: bits,
            })
        })
        .collect()
}

fn thresholds(cfg: &RunConfig, sink: &mut Sink) -> RunResult<i32> {
    let ns = if cfg.n.is_empty() { vec![1_000, 1_000_000, 1_000_000_000, 1_000_000_000_000] } else { cfg.n.clone() };
    let delta = cfg.delta.as_deref().unwrap_or("0.5");
    let eps2 = cfg.eps2.as_deref().unwrap_or("0.49");
    for row in threshold_rows(cfg.precision_bits, &ns, delta, eps2)? {
        sink.emit(&row)?;
    }
    Ok(0)
}

fn log_fields(c: &mut HpContext, v: &HpReal) -> Value {
    let ln10 = c.ln(&HpReal::from_u64(10, c.bits()));
    json!({"value": v.to_f64(), "value_log10": (v / &ln10).to_f64(), "value_decimal": v.to_decimal_string(c)})
}

fn bound(cfg: &RunConfig, sink: &mut Sink) -> RunResult<i32> {
    let k = cfg.need_k()?;
    let cap = cfg.cap();
    let mut c = HpContext::new(cfg.precision_bits)?;
    let v = chernoff_bound_logN(&mut c, k, cap, cfg.refine)?;
    let exp_form = chernoff_exp_form_logN(&mut c, k, cap)?;
    let mut rec = json!({
        "op": "bound",
        "inputs": {"k": k, "d_cap": cfg.d_cap, "refine": cfg.refine},
        "precision_bits": cfg.precision_bits,
    });
    merge(&mut rec, log_fields(&mut c, &v));
    rec["exp_form_value"] = json!(exp_form.to_f64());
    if k <= EXACT_COMPARE_KMAX {
        rec["exact_log_N"] = json!(exact_log_n(&mut c, k, cap)?.map(|x| x.to_f64()));
    }
    rec["tolerance_flags"] = json!(["upper_bound", "natural_log"]);
    sink.emit(&rec)?;
    Ok(0)
}

fn integral(cfg: &RunConfig, sink: &mut Sink) -> RunResult<i32> {
    let k = cfg.need_k()?;
    let cap = cfg.cap();
    let mut spec = QuadratureSpec { precision_bits: cfg.precision_bits, ..QuadratureSpec::default() };
    if let Some(t) = cfg.tolerance {
        spec.relative_tolerance = t;
    }
    let report = saddle_integral_logN(k, cap, &spec)?;
    let mut c = HpContext::new(cfg.precision_bits)?;
    let mut rec = json!({
        "op": "integral",
        "inputs": {"k": k, "d_cap": cfg.d_cap, "tol": spec.relative_tolerance},
        "precision_bits": cfg.precision_bits,
    });
    merge(&mut rec, log_fields(&mut c, &report.log_n));
    rec["nodes_per_axis"] = json!(report.nodes_per_axis);
    rec["factors"] = json!(report.factors);
    rec["imag_ratio"] = json!(report.imag_ratio);
    rec["last_change"] = json!(report.last_change);
    if k <= EXACT_COMPARE_KMAX {
        if let Some(x) = exact_log_n(&mut c, k, cap)? {
            rec["exact_log_N"] = json!(x.to_f64());
            rec["relative_error"] = json!(((&report.log_n - &x).abs() / x.abs()).to_f64());
        }
    }
    rec["tolerance_flags"] = json!(["converged", "natural_log"]);
    sink.emit(&rec)?;
    Ok(0)
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}

/// Trials sampled per block before output is written.
const SAMPLE_BLOCK: u64 = 8192;

fn sample(cfg: &RunConfig, sink: &mut Sink) -> RunResult<i32> {
    let n = cfg.single_n()?.ok_or_else(|| RunError::Usage("--n is required".into()))?;
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()).into());
    }
    if cfg.k == Some(0) {
        return Err(Error::Domain("k must be at least 1".into()).into());
    }
    let trials = cfg.trials.unwrap_or(1000);
    let source = RandomSource::new(cfg.seed, 0);
    let mut tally = Tally::default();
    let mut histogram: BTreeMap<usize, u64> = BTreeMap::new();
    let mut start = 0;
    while start < trials {
        let end = (start + SAMPLE_BLOCK).min(trials);
        let counts = parallel::twin_counts(n as usize, &source, start..end)?;
        for (t, c) in (start..end).zip(counts) {
            let max = c.last().map_or(0, |p| p.0);
            *histogram.entry(max).or_insert(0) += 1;
            if let Some(k) = cfg.k {
                tally.push(c.iter().find(|p| p.0 == k).map_or(0, |p| p.1));
            }
            match cfg.report {
                Report::Trees => {
                    sink.emit(&json!({"op": "sample", "trial": t, "max_twin_size": max, "twin_counts": c}))?
                }
                Report::MaxTwin => sink.emit(&json!({"op": "sample", "trial": t, "max_twin_size": max}))?,
                Report::Summary => {}
            }
        }
        start = end;
    }
    let estimate = cfg.k.map(|_| EstimateWithCI::from_tally(&tally, cfg.seed));
    let exact = match cfg.k {
        Some(k) if n > 2 * k as u64 => Some(expected_twin_pairs(n, k as u64)?.to_f64()),
        _ => None,
    };
    let hist: Vec<(usize, u64)> = histogram.into_iter().collect();
    sink.emit(&json!({
        "op": "sample",
        "inputs": {"n": n, "k": cfg.k, "trials": trials, "seed": cfg.seed},
        "estimate": estimate,
        "exact_mean": exact,
        "max_twin_histogram": hist,
    }))?;
    Ok(0)
}

fn lemma1(
    cfg: &RunConfig,
    radii: usize,
    phases: usize,
    r_min: f64,
    r_max: f64,
    alpha: Option<f64>,
    sink: &mut Sink,
) -> RunResult<i32> {
    let bits = cfg.precision_bits;
    let mut c = HpContext::new(bits)?;
    let mut opts = HOptions::for_precision(bits);
    if let Some(t) = cfg.tolerance {
        opts.relative_tolerance = t;
    }
    let grid = Lemma1Grid::polar(&mut c, radii, phases, r_min, r_max, true)?;
    let report = match alpha {
        Some(a) => lemma1_validate(&mut c, &grid, &HpReal::from_f64(a, bits), &opts)?,
        None => lemma1_two_pass(&mut c, &grid, &opts)?.1,
    };
    let mut rec = json!({
        "op": "lemma1",
        "inputs": {"radii": radii, "phases": phases, "r_min": r_min, "r_max": r_max, "alpha": alpha},
        "precision_bits": bits,
        "passed": report.passed(),
    });
    merge(&mut rec, lemma1_report_json(&report));
    sink.emit(&rec)?;
    Ok(if report.passed() { 0 } else { 1 })
}
