use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use thorinkit::measures::{parse_measure_literals, Measure};
use thorinkit::numerics::log_space;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "thorinkit", version, about = "Thorin-Bernstein functions: evaluation, identity checks and approximation tables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a special function or a function class on an x grid.
    Eval(EvalArgs),
    /// Run identities from the verification registry.
    Verify(VerifyArgs),
    /// Convergence table of the approximants F_n.
    Approx(ApproxArgs),
    /// Plot-ready data series.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum FnName {
    IncGammaLower,
    IncGammaUpper,
    IncBeta,
    Hyp2f1,
    ExpInt,
    Thorin,
    Stieltjes,
    Bernstein,
    Lomax,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum ReprChoice {
    All,
    Defining,
    BetaForm,
    HyperForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Series {
    #[value(name = "h_k")]
    HK,
    Thorin,
    Pick,
    Lomax,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<f64>,
    /// Measure record such as `atom:loc=1,mass=1` or `powerexp:r=1,c=0`; repeat to add.
    #[arg(long = "measure")]
    pub measures: Vec<String>,
    /// JSON file supplying any of the parameters above, `x`, `n` and a `measure` object.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Evaluation points, comma separated or repeated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub x: Vec<f64>,
    /// Log-spaced points `lo:hi:count`.
    #[arg(long)]
    pub x_range: Option<String>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long = "fn", value_enum)]
    pub function: FnName,
    /// Representation columns for `thorin`.
    #[arg(long, value_enum, default_value_t = ReprChoice::All)]
    pub repr: ReprChoice,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Identity id; repeat for several.
    #[arg(long = "id", required_unless_present = "all", conflicts_with = "all")]
    pub ids: Vec<String>,
    #[arg(long)]
    pub all: bool,
    /// Tolerance replacing every selected identity's own.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Grid override `name=v1,v2`; only with a single --id.
    #[arg(long = "grid")]
    pub grid: Vec<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ApproxArgs {
    /// Approximation indices, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<u32>,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long, value_enum)]
    pub series: Series,
    /// Largest k for `h_k`, counterexample order for `pick`.
    #[arg(long)]
    pub n: Option<u32>,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    lambda: Option<f64>,
    alpha: Option<f64>,
    a: Option<f64>,
    b: Option<f64>,
    c: Option<f64>,
    p: Option<f64>,
    x: Option<Vec<f64>>,
    n: Option<Vec<u32>>,
    measure: Option<Measure>,
    #[serde(default)]
    measures: Vec<String>,
}

/// Flags merged over the optional JSON config.
#[derive(Debug, Clone, Default)]
pub struct Params {
    pub lambda: Option<f64>,
    pub alpha: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub c: Option<f64>,
    pub p: Option<f64>,
    pub x: Vec<f64>,
    pub n: Vec<u32>,
    pub measure: Option<Measure>,
}

impl Params {
    pub fn require(&self, v: Option<f64>, flag: &str, what: &str) -> Result<f64, CliError> {
        v.ok_or_else(|| CliError::usage(format!("--{flag} is required for {what}")))
    }

    pub fn measure(&self, what: &str) -> Result<Measure, CliError> {
        self.measure.clone().ok_or_else(|| CliError::usage(format!("--measure is required for {what}")))
    }

    pub fn xs(&self, what: &str) -> Result<Vec<f64>, CliError> {
        if self.x.is_empty() {
            return Err(CliError::usage(format!("--x or --x-range is required for {what}")));
        }
        Ok(self.x.clone())
    }
}

fn parse_range(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::usage(format!("--x-range expects lo:hi:count with 0 < lo < hi, got `{s}`"));
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, n] = parts.as_slice() else { return Err(bad()) };
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if !(lo > 0.0 && hi > lo && hi.is_finite() && n >= 1) {
        return Err(bad());
    }
    Ok(log_space(lo, hi, n))
}

impl ParamArgs {
    pub fn resolve(&self, n: &[u32]) -> Result<Params, CliError> {
        let cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
                serde_json::from_str::<ConfigFile>(&text)
                    .map_err(|e| CliError::usage(format!("bad config {}: {e}", path.display())))?
            }
            None => ConfigFile::default(),
        };
        let mut x = self.x.clone();
        if let Some(r) = &self.x_range {
            x.extend(parse_range(r)?);
        }
        if x.is_empty() {
            x = cfg.x.unwrap_or_default();
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(CliError::usage("evaluation points must be finite"));
        }
        x.sort_by(f64::total_cmp);
        x.dedup();
        let measure = if !self.measures.is_empty() {
            Some(parse_measure_literals(&self.measures)?)
        } else if let Some(m) = cfg.measure {
            Some(if cfg.measures.is_empty() { m } else { m.plus(&parse_measure_literals(&cfg.measures)?) })
        } else if !cfg.measures.is_empty() {
            Some(parse_measure_literals(&cfg.measures)?)
        } else {
            None
        };
        Ok(Params {
            lambda: self.lambda.or(cfg.lambda),
            alpha: self.alpha.or(cfg.alpha),
            a: self.a.or(cfg.a),
            b: self.b.or(cfg.b),
            c: self.c.or(cfg.c),
            p: self.p.or(cfg.p),
            x,
            n: if n.is_empty() { cfg.n.unwrap_or_default() } else { n.to_vec() },
            measure,
        })
    }
}
