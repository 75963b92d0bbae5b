//! The `expent` command-line front end.
//!
//! Exit codes: 0 success, 1 verification found gating violations, 2 invalid
//! input, 3 unparseable input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classical::{
    exp_entropy, exp_thc_entropy, kapur_entropy, power_sum, renyi_entropy, shannon_entropy,
    thc_entropy, Alpha, Distribution, ExpKind, Normalization,
};
use crate::linalg::{sample_density, ComplexMatrix, DensityMethod};
use crate::quantum::{exp_qthc, von_neumann, DensityOperator};
use crate::verify::{check_suite, Suite, SuiteConfig, VerificationReport, DEFAULT_ALPHAS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_PARSE: i32 = 3;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            Self::Parse(_) => EXIT_PARSE,
            Self::Invalid(_) => EXIT_INVALID,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        Self::Invalid(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Density matrix on disk: `{"dim": n, "re": [[..]], "im": [[..]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl StateFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            dim: m.dim(),
            re: m.real_parts(),
            im: m.imag_parts(),
        }
    }

    pub fn to_matrix(&self) -> crate::Result<ComplexMatrix> {
        let m = ComplexMatrix::from_parts(&self.re, &self.im)?;
        if m.dim() != self.dim {
            return Err(crate::Error::DimensionMismatch(self.dim, m.dim()));
        }
        Ok(m)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "expent",
    version,
    about = "Exponential entropies of distributions and density operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one entropy measure.
    Compute(ComputeArgs),
    /// Run seeded property suites.
    Verify(VerifyArgs),
    /// Tabulate measures over a grid of α values as CSV.
    Sweep(SweepArgs),
    /// Write a random density matrix as a state file.
    Sample(SampleArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Probability vector, e.g. 0.5,0.5
    #[arg(long, value_parser = parse_f64_list, allow_hyphen_values = true)]
    dist: Option<FloatList>,
    /// JSON state file with keys dim, re, im
    #[arg(long)]
    state: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ComputeArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum)]
    measure: Measure,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Second order, used by kapur and exp-kapur.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Classical,
    Quantum,
    Measurement,
    Ensemble,
    All,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: SuiteArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Inclusive range `2..8` or list `2,3,5`.
    #[arg(long, value_parser = parse_dims, default_value = "2..8")]
    dims: DimList,
    #[arg(long, value_parser = parse_f64_list)]
    alphas: Option<FloatList>,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Also run exploratory, non-gating checks.
    #[arg(long)]
    explore: bool,
    /// Run trials on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    input: Input,
    /// Comma-separated measure names.
    #[arg(long, value_delimiter = ',', required = true)]
    measures: Vec<Measure>,
    #[arg(long, allow_hyphen_values = true)]
    alpha_min: f64,
    #[arg(long, allow_hyphen_values = true)]
    alpha_max: f64,
    #[arg(long)]
    steps: usize,
    #[arg(long, value_enum, default_value = "linear")]
    scale: Scale,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "ginibre")]
    method: MethodArg,
    /// Output path; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Ginibre,
    DiagMixture,
    Pure,
}

impl From<MethodArg> for DensityMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Ginibre => Self::Ginibre,
            MethodArg::DiagMixture => Self::DiagMixture,
            MethodArg::Pure => Self::Pure,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Measure {
    Shannon,
    Hc,
    Tsallis,
    Renyi,
    Kapur,
    ExpShannon,
    ExpRenyi,
    ExpKapur,
    ExpThc,
    VonNeumann,
    ExpQthc,
}

impl Measure {
    fn name(self) -> String {
        self.to_possible_value()
            .expect("no skipped variants")
            .get_name()
            .to_string()
    }

    fn is_quantum(self) -> bool {
        matches!(self, Self::VonNeumann | Self::ExpQthc)
    }

    fn needs_alpha(self) -> bool {
        !matches!(self, Self::Shannon | Self::ExpShannon | Self::VonNeumann)
    }

    fn needs_beta(self) -> bool {
        matches!(self, Self::Kapur | Self::ExpKapur)
    }
}

#[derive(Debug, Clone)]
struct FloatList(Vec<f64>);

#[derive(Debug, Clone)]
struct DimList(Vec<usize>);

fn parse_f64_list(s: &str) -> std::result::Result<FloatList, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<std::result::Result<_, _>>()
        .map(FloatList)
}

fn parse_dims(s: &str) -> std::result::Result<DimList, String> {
    dims_of(s).map(DimList)
}

fn dims_of(s: &str) -> std::result::Result<Vec<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    if let Some((lo, hi)) = s.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let (lo, hi) = (num(lo)?, num(hi)?);
        if lo > hi {
            return Err(format!("empty range {s}"));
        }
        Ok((lo..=hi).collect())
    } else {
        s.split(',').map(num).collect()
    }
}

/// 12 significant digits, trailing zeros trimmed, scientific notation when
/// |v| ≥ 1e6 or |v| < 1e-6.
pub fn format_value(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string().to_lowercase();
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-6..6).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

enum Source {
    Dist(Distribution),
    State(DensityOperator),
}

impl Source {
    fn load(input: &Input) -> CliResult<Self> {
        match (&input.dist, &input.state) {
            (Some(p), None) => Ok(Self::Dist(Distribution::new(p.0.clone())?)),
            (None, Some(path)) => Ok(Self::State(read_state(path)?)),
            _ => Err(CliError::Invalid(
                "give exactly one of --dist or --state".into(),
            )),
        }
    }

    fn distribution(&self) -> CliResult<Distribution> {
        match self {
            Self::Dist(d) => Ok(d.clone()),
            Self::State(rho) => Ok(Distribution::renormalized(rho.eigenvalues().to_vec())?),
        }
    }

    fn state(&self) -> CliResult<DensityOperator> {
        match self {
            Self::Dist(d) => Ok(DensityOperator::from_diagonal(d.probs())?),
            Self::State(rho) => Ok(rho.clone()),
        }
    }
}

fn read_state(path: &Path) -> CliResult<DensityOperator> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
    let file: StateFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    Ok(DensityOperator::new(file.to_matrix()?)?)
}

fn alpha_of(v: Option<f64>, flag: &str) -> CliResult<Alpha> {
    let v = v.ok_or_else(|| CliError::Invalid(format!("{flag} is required for this measure")))?;
    Ok(Alpha::new(v)?)
}

/// −Σ p^a ln p / Σ p^a: the Kapur entropy as β → α.
fn kapur_diagonal(a: &Distribution, alpha: f64) -> f64 {
    let p = a.probs();
    let weighted: f64 = p
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x.powf(alpha) * x.ln())
        .sum();
    -weighted / power_sum(p, alpha)
}

/// Evaluates `measure`, substituting continuous limits where the defining
/// formula is singular (α = 1, or α = β for Kapur) when `limits` is set.
fn evaluate(
    measure: Measure,
    src: &Source,
    alpha: Option<f64>,
    beta: Option<f64>,
    limits: bool,
) -> CliResult<f64> {
    let alpha = if measure.needs_alpha() {
        Some(alpha_of(alpha, "--alpha")?)
    } else {
        None
    };
    let beta = if measure.needs_beta() {
        Some(alpha_of(beta, "--beta")?)
    } else {
        None
    };
    let at_one = limits && alpha.is_some_and(Alpha::is_one);
    let kapur_diag = limits && measure.needs_beta() && alpha == beta;

    if measure.is_quantum() {
        let rho = src.state()?;
        return Ok(match measure {
            Measure::VonNeumann => von_neumann(&rho),
            _ => exp_qthc(&rho, alpha.expect("checked")),
        });
    }

    let d = src.distribution()?;
    let h = || shannon_entropy(&d);
    Ok(match measure {
        Measure::Shannon => h(),
        Measure::ExpShannon => exp_entropy(&d, ExpKind::Shannon)?,
        Measure::ExpThc => exp_thc_entropy(&d, alpha.expect("checked")),
        Measure::Hc if at_one => h() / std::f64::consts::LN_2,
        Measure::Tsallis | Measure::Renyi if at_one => h(),
        Measure::ExpRenyi if at_one => h().exp(),
        Measure::Hc => thc_entropy(&d, alpha.expect("checked"), Normalization::HavrdaCharvat)?,
        Measure::Tsallis => thc_entropy(&d, alpha.expect("checked"), Normalization::Tsallis)?,
        Measure::Renyi => renyi_entropy(&d, alpha.expect("checked"))?,
        Measure::ExpRenyi => exp_entropy(&d, ExpKind::Renyi(alpha.expect("checked")))?,
        Measure::Kapur if kapur_diag => kapur_diagonal(&d, alpha.expect("checked").value()),
        Measure::ExpKapur if kapur_diag => {
            kapur_diagonal(&d, alpha.expect("checked").value()).exp()
        }
        Measure::Kapur => kapur_entropy(&d, alpha.expect("checked"), beta.expect("checked"))?,
        Measure::ExpKapur => exp_entropy(
            &d,
            ExpKind::Kapur(alpha.expect("checked"), beta.expect("checked")),
        )?,
        Measure::VonNeumann | Measure::ExpQthc => unreachable!("handled above"),
    })
}

fn cmd_compute(args: ComputeArgs, out: &mut dyn Write) -> CliResult<i32> {
    let src = Source::load(&args.input)?;
    let v = evaluate(args.measure, &src, args.alpha, args.beta, false)?;
    writeln!(out, "{}", format_value(v)).map_err(io_err)?;
    Ok(EXIT_OK)
}

fn sweep_grid(min: f64, max: f64, steps: usize, scale: Scale) -> CliResult<Vec<f64>> {
    if !(min > 0.0 && min.is_finite() && max.is_finite()) {
        return Err(CliError::Invalid(format!(
            "alpha-min must be positive, got {min}"
        )));
    }
    if max <= min {
        return Err(CliError::Invalid(format!(
            "alpha-max {max} must exceed alpha-min {min}"
        )));
    }
    if steps < 2 {
        return Err(CliError::Invalid(format!(
            "steps must be at least 2, got {steps}"
        )));
    }
    let last = (steps - 1) as f64;
    let grid = (0..steps).map(|i| {
        let t = i as f64 / last;
        match scale {
            Scale::Linear => min + t * (max - min),
            Scale::Log => (min.ln() + t * (max.ln() - min.ln())).exp(),
        }
    });
    // Pin the endpoints and snap near-integers so α = 1 hits the limit branch.
    Ok(grid
        .enumerate()
        .map(|(i, a)| match i {
            0 => min,
            i if i + 1 == steps => max,
            _ if (a - a.round()).abs() < 1e-12 => a.round(),
            _ => a,
        })
        .collect())
}

fn cmd_sweep(args: SweepArgs, out: &mut dyn Write) -> CliResult<i32> {
    let grid = sweep_grid(args.alpha_min, args.alpha_max, args.steps, args.scale)?;
    let src = Source::load(&args.input)?;
    let mut rows = String::from("alpha,measure,value\n");
    for &m in &args.measures {
        for &a in &grid {
            let v = evaluate(m, &src, Some(a), args.beta, true)?;
            rows.push_str(&format!(
                "{},{},{}\n",
                format_value(a),
                m.name(),
                format_value(v)
            ));
        }
    }
    out.write_all(rows.as_bytes()).map_err(io_err)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ReportSet<'a> {
    reports: &'a [VerificationReport],
}

fn cmd_verify(args: VerifyArgs, out: &mut dyn Write) -> CliResult<i32> {
    let suites: Vec<Suite> = match args.suite {
        SuiteArg::All => Suite::ALL.to_vec(),
        SuiteArg::Classical => vec![Suite::Classical],
        SuiteArg::Quantum => vec![Suite::Quantum],
        SuiteArg::Measurement => vec![Suite::Measurement],
        SuiteArg::Ensemble => vec![Suite::Ensemble],
    };
    let mut cfg = SuiteConfig::new(args.seed, args.trials)
        .with_dims(args.dims.0)
        .with_alphas(args.alphas.map_or_else(|| DEFAULT_ALPHAS.to_vec(), |a| a.0));
    cfg.explore = args.explore;
    cfg.parallel = !args.sequential;

    let reports = suites
        .iter()
        .map(|&s| check_suite(s, &cfg))
        .collect::<crate::Result<Vec<_>>>()?;
    let gating: usize = reports
        .iter()
        .map(VerificationReport::gating_violations)
        .sum();

    let mut text = String::new();
    for r in &reports {
        text.push_str(&r.summary());
    }
    text.push_str(&format!("gating violations: {gating}\n"));
    out.write_all(text.as_bytes()).map_err(io_err)?;

    let mut json =
        serde_json::to_string_pretty(&ReportSet { reports: &reports }).expect("report serializes");
    json.push('\n');
    match &args.report {
        Some(path) => std::fs::write(path, json)
            .map_err(|e| CliError::Invalid(format!("cannot write {}: {e}", path.display())))?,
        None => out.write_all(json.as_bytes()).map_err(io_err)?,
    }
    Ok(if gating == 0 {
        EXIT_OK
    } else {
        EXIT_VIOLATIONS
    })
}

fn cmd_sample(args: SampleArgs, out: &mut dyn Write) -> CliResult<i32> {
    if args.dim == 0 || args.dim > crate::linalg::DEFAULT_DIM_CAP {
        return Err(CliError::Invalid(format!(
            "dim must lie in 1..={}",
            crate::linalg::DEFAULT_DIM_CAP
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let m = sample_density(args.dim, &mut rng, args.method.into());
    let mut json =
        serde_json::to_string_pretty(&StateFile::from_matrix(&m)).expect("state serializes");
    json.push('\n');
    match &args.out {
        Some(path) => std::fs::write(path, json)
            .map_err(|e| CliError::Invalid(format!("cannot write {}: {e}", path.display())))?,
        None => out.write_all(json.as_bytes()).map_err(io_err)?,
    }
    Ok(EXIT_OK)
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Invalid(format!("write failed: {e}"))
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code. Output goes to `out`, diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                ErrorKind::ValueValidation => EXIT_PARSE,
                _ => EXIT_INVALID,
            };
            let target: &mut dyn Write = if code == EXIT_OK { out } else { err };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Compute(a) => cmd_compute(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Sweep(a) => cmd_sweep(a, out),
        Command::Sample(a) => cmd_sample(a, out),
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(err, "error: {e}");
        e.code()
    })
}

/// [`run_with`] on the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run_with(args, &mut stdout.lock(), &mut stderr.lock());
    let _ = std::io::stdout().flush();
    code
}
