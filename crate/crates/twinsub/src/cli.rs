//! Argument parsing and the resolved [`RunConfig`].

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use twinsub_core::hp::{DEFAULT_PRECISION_BITS, MIN_PRECISION_BITS};
use twinsub_core::profile_enum::DegreeCap;

use crate::error::{RunError, RunResult};
use crate::output::OutputFormat;
use crate::verify::Suite;

/// Environment variable overriding the default working precision.
pub const PRECISION_ENV: &str = "TWIN_PRECISION_BITS";

#[derive(Debug, Parser)]
#[command(name = "twinsub", version, about = "Twin fringe subtrees of random rooted labeled trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Exact M-profile table, N(k), S_n(k) and m_n(k).
    Exact {
        /// Skip the per-profile table.
        #[arg(long)]
        no_table: bool,
    },
    /// Run a cross-validation suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Size thresholds K_n, k_n and the envelopes at them.
    Thresholds,
    /// Chernoff upper bound on ln N(k).
    Bound,
    /// ln N(k) from the two-dimensional Cauchy integral.
    Integral,
    /// Sample uniform rooted labeled trees and count twins.
    Sample,
    /// Check |H(z)| <= |exp(2 sqrt z)| / max(1, alpha |z|^(1/4)) on a polar grid.
    Lemma1 {
        #[arg(long, default_value_t = 100)]
        radii: usize,
        #[arg(long, default_value_t = 100)]
        phases: usize,
        #[arg(long, default_value_t = 1e-4)]
        r_min: f64,
        #[arg(long, default_value_t = 1e6)]
        r_max: f64,
        /// Constant to test; defaults to the empirical one times (1 - 1e-6).
        #[arg(long)]
        alpha: Option<f64>,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Report {
    /// One line per sampled tree, then the estimate.
    #[default]
    Trees,
    /// Only the estimate.
    Summary,
    /// Largest twin size per tree and their histogram.
    MaxTwin,
}

#[derive(Debug, Clone, Args)]
pub struct Flags {
    /// Host tree size; a comma-separated list for `thresholds`.
    #[arg(long, global = true, value_delimiter = ',')]
    pub n: Vec<u64>,
    /// Fringe subtree size.
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// Only allow out-degrees below this value.
    #[arg(long, global = true)]
    pub d_cap: Option<usize>,
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Working precision in bits (default from TWIN_PRECISION_BITS, else 256).
    #[arg(long, global = true)]
    pub precision_bits: Option<usize>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Threshold exponent offset, as a decimal literal.
    #[arg(long, global = true)]
    pub delta: Option<String>,
    /// Envelope parameter in (0, 1/2), as a decimal literal.
    #[arg(long, global = true)]
    pub eps2: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Worker threads (0 = all cores). Never changes the output.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[arg(long, global = true)]
    pub kmax: Option<usize>,
    #[arg(long, global = true)]
    pub nmax: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Report::Trees)]
    pub report: Report,
    /// Refine the Chernoff bound by coordinate search.
    #[arg(long, global = true)]
    pub refine: bool,
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub n: Vec<u64>,
    pub k: Option<usize>,
    pub d_cap: Option<usize>,
    pub trials: Option<u64>,
    pub seed: u64,
    pub precision_bits: usize,
    pub tolerance: Option<f64>,
    pub delta: Option<String>,
    pub eps2: Option<String>,
    pub output_format: OutputFormat,
    #[serde(skip)]
    pub threads: usize,
    pub kmax: Option<usize>,
    pub nmax: Option<usize>,
    pub report: Report,
    pub refine: bool,
}

impl RunConfig {
    /// Resolves defaults; `env_precision` is the value of [`PRECISION_ENV`].
    pub fn resolve(cli: Cli, env_precision: Option<&str>) -> RunResult<Self> {
        let f = cli.flags;
        let precision_bits = match (f.precision_bits, env_precision) {
            (Some(p), _) => p,
            (None, Some(s)) => s
                .trim()
                .parse()
                .map_err(|_| RunError::Usage(format!("{PRECISION_ENV} must be a positive integer (got {s:?})")))?,
            (None, None) => DEFAULT_PRECISION_BITS,
        };
        if precision_bits < MIN_PRECISION_BITS {
            return Err(RunError::Usage(format!("precision must be at least {MIN_PRECISION_BITS} bits")));
        }
        if let Some(t) = f.tol {
            if !(t > 0.0 && t < 1.0) {
                return Err(RunError::Usage(format!("--tol must lie in (0, 1) (got {t})")));
            }
        }
        if matches!(f.trials, Some(0)) {
            return Err(RunError::Usage("--trials must be at least 1".into()));
        }
        if let Some(d) = f.d_cap {
            DegreeCap::below(d)?;
        }
        Ok(Self {
            command: cli.command,
            n: f.n,
            k: f.k,
            d_cap: f.d_cap,
            trials: f.trials,
            seed: f.seed,
            precision_bits,
            tolerance: f.tol,
            delta: f.delta,
            eps2: f.eps2,
            output_format: f.format,
            threads: f.threads,
            kmax: f.kmax,
            nmax: f.nmax,
            report: f.report,
            refine: f.refine,
        })
    }

    pub fn cap(&self) -> DegreeCap {
        self.d_cap.map_or(DegreeCap::Unbounded, DegreeCap::Below)
    }

    pub fn single_n(&self) -> RunResult<Option<u64>> {
        match self.n.as_slice() {
            [] => Ok(None),
            [n] => Ok(Some(*n)),
            _ => Err(RunError::Usage("this command takes a single --n".into())),
        }
    }

    pub fn need_k(&self) -> RunResult<usize> {
        self.k.ok_or_else(|| RunError::Usage("--k is required".into()))
    }
}
