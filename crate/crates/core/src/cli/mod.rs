//! The `powrel` command line: point evaluation, plot grids, simulation and
//! analytic-versus-simulation verification.
//!
//! [`run`] takes the full argument list and returns the exit code together
//! with what would have been written to stdout and stderr, so the command can
//! be driven in-process.

mod verify;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::config::{ConfigError, ModelFile};
use crate::montecarlo::{Estimate, MonteCarlo};
use crate::quadrature::QuadratureConfig;
use crate::reliability::{Analysis, EvalPoint, SystemModel, ThresholdConvention};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_VERIFY_FAILED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "powrel", version, about = "Operational reliability of systems with decaying component power")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Model file (TOML, or JSON when the name ends in .json).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Relative quadrature tolerance (overrides the model file).
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Absolute quadrature tolerance (overrides the model file).
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Number of simulated systems.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub samples: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Power threshold used past the inspection time.
    #[arg(long, global = true, value_enum, default_value_t = ThresholdConvention::PaperLiteral)]
    pub convention: ThresholdConvention,
    /// Worker threads (defaults to one per core). Results do not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one quantity at one point; prints a JSON record.
    Eval(PointArgs),
    /// Evaluate a quantity over a grid; prints CSV.
    Grid(GridArgs),
    /// Monte Carlo estimate of one quantity; prints a JSON record.
    Simulate(PointArgs),
    /// Compare quadrature with simulation; prints a JSON report.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[value(rename_all = "snake_case")]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// P{X_(r:n) > t}
    Physical,
    /// P{X_(r:n) > t, min live power > s / phi(t)}
    JointSurvival,
    /// Joint density of X_(r:n) and the min live power at (t, w = s)
    JointPdf,
    /// Joint cdf of X_(r:n) and the min live power at (t, w = s)
    JointCdf,
    /// P{min live power > s}
    MinConcomitantSurvival,
    /// Joint survival divided by the min-concomitant survival
    OperationalReliability,
    /// Residual-life cdf at x given survival to t
    ResidualCdf,
    /// Residual-life density at x given survival to t
    ResidualPdf,
    /// Mean residual life beyond t
    Mrl,
}

impl Quantity {
    fn needs_x(self) -> bool {
        matches!(self, Self::ResidualCdf | Self::ResidualPdf)
    }

    fn uses_convention(self) -> bool {
        matches!(self, Self::ResidualCdf | Self::ResidualPdf | Self::Mrl)
    }

    fn name(self) -> &'static str {
        match self {
            Self::Physical => "physical",
            Self::JointSurvival => "joint_survival",
            Self::JointPdf => "joint_pdf",
            Self::JointCdf => "joint_cdf",
            Self::MinConcomitantSurvival => "min_concomitant_survival",
            Self::OperationalReliability => "operational_reliability",
            Self::ResidualCdf => "residual_cdf",
            Self::ResidualPdf => "residual_pdf",
            Self::Mrl => "mrl",
        }
    }
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long, value_enum)]
    pub quantity: Quantity,
    /// Inspection time.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub t: f64,
    /// Power level (for joint_pdf and joint_cdf: the fixed threshold w).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub s: f64,
    /// Running time for residual_cdf and residual_pdf.
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, value_enum)]
    pub quantity: Quantity,
    /// Time axis `lo:hi:steps` (not used by residual quantities).
    #[arg(long)]
    pub t: Option<Range>,
    /// Power axis `lo:hi:steps`.
    #[arg(long, conflicts_with = "s_list")]
    pub s: Option<Range>,
    /// Power levels, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub s_list: Vec<f64>,
    /// Running-time axis `lo:hi:steps` for residual quantities.
    #[arg(long)]
    pub x: Option<Range>,
    /// Inspection time for residual quantities.
    #[arg(long)]
    pub inspection: Option<f64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Points `t:s`, comma separated. Defaults to points chosen from the
    /// model's marginal quantiles.
    #[arg(long, value_delimiter = ',')]
    pub points: Vec<PointSpec>,
}

/// Evenly spaced axis `lo:hi:steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| if i + 1 == self.steps { self.hi } else { self.lo + (self.hi - self.lo) * i as f64 / last })
            .collect()
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, steps] = parts.as_slice() else {
            return Err(format!("expected lo:hi:steps, got {s:?}"));
        };
        let lo: f64 = lo.parse().map_err(|e| format!("bad lower end {lo:?}: {e}"))?;
        let hi: f64 = hi.parse().map_err(|e| format!("bad upper end {hi:?}: {e}"))?;
        let steps: usize = steps.parse().map_err(|e| format!("bad step count {steps:?}: {e}"))?;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(format!("range {lo}..{hi} is empty or not finite"));
        }
        if steps < 2 {
            return Err("a range needs at least 2 steps".into());
        }
        Ok(Self { lo, hi, steps })
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.steps)
    }
}

/// A verification point `t:s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSpec {
    pub t: f64,
    pub s: f64,
}

impl FromStr for PointSpec {
    type Err = String;

    fn from_str(v: &str) -> Result<Self, Self::Err> {
        let (t, s) = v.split_once(':').ok_or_else(|| format!("expected t:s, got {v:?}"))?;
        let t = t.parse().map_err(|e| format!("bad t {t:?}: {e}"))?;
        let s = s.parse().map_err(|e| format!("bad s {s:?}: {e}"))?;
        Ok(Self { t, s })
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Compute(#[from] crate::Error),
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Compute(crate::Error::InvalidModel(_)) => EXIT_INPUT,
            Self::Compute(_) => EXIT_NUMERICAL,
            Self::Usage(_) | Self::Config(_) | Self::Output(_) => EXIT_INPUT,
        }
    }
}

/// Exit code and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(&cli) {
        Ok((code, text)) => match &cli.global.out {
            Some(path) => match std::fs::write(path, &text) {
                Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
                Err(e) => failure(&CliError::Output(e)),
            },
            None => Outcome { code, stdout: text, stderr: String::new() },
        },
        Err(e) => failure(&e),
    }
}

fn failure(e: &CliError) -> Outcome {
    Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") }
}

/// Runs a parsed command, returning the exit code and the text to emit.
pub fn execute(cli: &Cli) -> Result<(i32, String), CliError> {
    let session = Session::open(&cli.global)?;
    let work = || match &cli.command {
        Command::Eval(p) => session.eval(p).map(|s| (EXIT_OK, s)),
        Command::Grid(g) => session.grid(g).map(|s| (EXIT_OK, s)),
        Command::Simulate(p) => session.simulate(p).map(|s| (EXIT_OK, s)),
        Command::Verify(v) => session.verify(v),
    };
    match cli.global.workers {
        Some(0) => Err(CliError::Usage("--workers must be >= 1".into())),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {k} workers: {e}")))?
            .install(work),
        None => work(),
    }
}

/// A loaded model plus the global settings.
struct Session {
    file: ModelFile,
    model: SystemModel,
    analysis: Analysis,
    quad: QuadratureConfig,
    seed: u64,
    samples: u64,
    conv: ThresholdConvention,
}

impl Session {
    fn open(g: &GlobalArgs) -> Result<Self, CliError> {
        let path = g.config.as_ref().ok_or_else(|| CliError::Usage("--config is required".into()))?;
        let file = ModelFile::load(path)?;
        let model = file.model()?;
        let mut quad = file.quadrature()?;
        if let Some(r) = g.rel_tol {
            quad.rel_tol = r;
        }
        if let Some(a) = g.abs_tol {
            quad.abs_tol = a;
        }
        quad.validate()?;
        if g.samples == 0 {
            return Err(CliError::Usage("--samples must be >= 1".into()));
        }
        Ok(Self {
            file,
            model,
            analysis: Analysis::new(model, quad),
            quad,
            seed: g.seed,
            samples: g.samples,
            conv: g.convention,
        })
    }

    fn monte_carlo(&self) -> Result<MonteCarlo, CliError> {
        Ok(MonteCarlo::new(self.model, self.samples, self.seed)?)
    }

    fn analytic(&self, q: Quantity, t: f64, s: f64, x: Option<f64>) -> Result<f64, CliError> {
        let a = &self.analysis;
        let x = || x.ok_or_else(|| CliError::Usage(format!("{} needs --x", q.name())));
        Ok(match q {
            Quantity::Physical => a.physical_reliability(t)?,
            Quantity::JointSurvival => a.joint_survival(EvalPoint::new(t, s)?)?,
            Quantity::JointPdf => a.joint_pdf(t, s)?,
            Quantity::JointCdf => a.joint_cdf_fixed(t, s)?,
            Quantity::MinConcomitantSurvival => a.min_concomitant_survival(s)?,
            Quantity::OperationalReliability => a.operational_reliability(EvalPoint::new(t, s)?)?,
            Quantity::ResidualCdf => a.residual_life_cdf(t, s, x()?, self.conv)?,
            Quantity::ResidualPdf => a.residual_life_pdf(t, s, x()?, self.conv)?,
            Quantity::Mrl => a.mean_residual_life(t, s, self.conv)?,
        })
    }

    fn record(&self, p: &PointArgs) -> PointRecord {
        PointRecord {
            quantity: p.quantity,
            t: p.t,
            s: p.s,
            x: p.x.filter(|_| p.quantity.needs_x()),
            convention: p.quantity.uses_convention().then(|| self.conv.as_str()),
            value: f64::NAN,
            std_error: None,
            n_samples: None,
            seed: None,
        }
    }

    fn eval(&self, p: &PointArgs) -> Result<String, CliError> {
        let value = self.analytic(p.quantity, p.t, p.s, p.x)?;
        Ok(to_json_line(&PointRecord { value, ..self.record(p) }))
    }

    fn simulate(&self, p: &PointArgs) -> Result<String, CliError> {
        let mc = self.monte_carlo()?;
        let pt = || EvalPoint::new(p.t, p.s);
        let est: Estimate = match p.quantity {
            Quantity::JointSurvival => mc.estimate_joint_survival(pt()?)?,
            Quantity::MinConcomitantSurvival => mc.estimate_min_concomitant_survival(p.s)?,
            Quantity::OperationalReliability => mc.estimate_operational_reliability(pt()?)?,
            Quantity::Physical => mc.estimate_joint_survival(EvalPoint::new(p.t, 0.0)?)?,
            Quantity::ResidualCdf => {
                let x = p.x.ok_or_else(|| CliError::Usage("residual_cdf needs --x".into()))?;
                mc.estimate_residual_cdf(p.t, p.s, x, self.conv)?
            }
            Quantity::Mrl => mc.estimate_mrl(p.t, p.s, self.conv)?,
            Quantity::JointPdf | Quantity::JointCdf | Quantity::ResidualPdf => {
                return Err(CliError::Usage(format!("{} has no simulation estimator", p.quantity.name())));
            }
        };
        Ok(to_json_line(&PointRecord {
            value: est.value,
            std_error: Some(est.std_error),
            n_samples: Some(est.n_samples),
            seed: Some(self.seed),
            ..self.record(p)
        }))
    }

    fn grid(&self, g: &GridArgs) -> Result<String, CliError> {
        let q = g.quantity;
        let s_axis = match (&g.s, g.s_list.is_empty()) {
            (Some(r), _) => r.values(),
            (None, false) => g.s_list.clone(),
            (None, true) => vec![0.0],
        };
        let (label, first_axis, inspection) = if q.needs_x() {
            let x = g.x.ok_or_else(|| CliError::Usage(format!("{} grids need --x", q.name())))?;
            let t0 = g.inspection.ok_or_else(|| CliError::Usage(format!("{} grids need --inspection", q.name())))?;
            ("x", x.values(), Some(t0))
        } else {
            let t = g.t.ok_or_else(|| CliError::Usage("grids need --t".into()))?;
            ("t", t.values(), None)
        };
        let cells: Vec<(f64, f64)> =
            s_axis.iter().flat_map(|&s| first_axis.iter().map(move |&a| (a, s))).collect();
        let values: Vec<f64> = cells
            .par_iter()
            .map(|&(a, s)| match inspection {
                Some(t0) => self.analytic(q, t0, s, Some(a)),
                None => self.analytic(q, a, s, None),
            })
            .collect::<Result<_, _>>()?;
        let mut out = format!("{label},s,value\n");
        for ((a, s), v) in cells.iter().zip(values) {
            out.push_str(&format!("{a},{s},{v}\n"));
        }
        Ok(out)
    }
}

#[derive(Debug, Serialize)]
struct PointRecord {
    quantity: Quantity,
    t: f64,
    s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    x: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    convention: Option<&'static str>,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    std_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

fn to_json_line<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("records serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_parse_and_span_endpoints() {
        let r: Range = "0:1:5".parse().unwrap();
        assert_eq!(r.values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let r: Range = "0.1:0.3:3".parse().unwrap();
        assert_eq!(*r.values().last().unwrap(), 0.3);
        assert!("0:1:1".parse::<Range>().is_err());
        assert!("1:0:3".parse::<Range>().is_err());
        assert!("0:1".parse::<Range>().is_err());
        assert!("a:1:3".parse::<Range>().is_err());
    }

    #[test]
    fn points_parse() {
        assert_eq!("0.5:2".parse::<PointSpec>().unwrap(), PointSpec { t: 0.5, s: 2.0 });
        assert!("0.5".parse::<PointSpec>().is_err());
    }

    #[test]
    fn quantity_names_match_value_names() {
        for q in Quantity::value_variants() {
            assert_eq!(q.to_possible_value().unwrap().get_name(), q.name());
        }
    }
}
