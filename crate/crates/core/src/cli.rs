//! Command-line front end.
//!
//! Values given as flags take precedence over the config file, which takes
//! precedence over built-in defaults. Exit codes: 0 on success, 1 on usage
//! or configuration errors, 2 when `--strict` is set and a solve did not
//! converge.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::{DMatrix, DVector};
use serde::Deserialize;

use crate::conic::{self, ConeDescriptor, LambdaMode, LambdaOptions};
use crate::error::{Error, Result};
use crate::harness::{self, Cell, EnsembleConfig, ExperimentConfig, Format, Problem, Table};
use crate::measure::{self, EnsembleSpec, MeasurementOperator, Noise};
use crate::rng::{self, tag};
use crate::smallball;
use crate::solve::{self, RecoveryResult, SolverOptions};
use crate::width::{self, WidthEstimate};

#[derive(Debug, Parser)]
#[command(name = "conic-recovery", version, about = "Convex recovery experiments from random linear measurements")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed override (64-bit unsigned).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write results here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Trial-count override.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Exit with status 2 if any solve fails to converge.
    #[arg(long, global = true)]
    pub strict: bool,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    JsonLines,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::JsonLines => Format::JsonLines,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProblemKind {
    Sparse,
    LowRank,
    Phase,
}

#[derive(Debug, Args, Clone)]
pub struct ProblemArgs {
    #[arg(long, value_enum)]
    pub problem: Option<ProblemKind>,
    /// Sparsity.
    #[arg(long)]
    pub s: Option<usize>,
    /// Ambient dimension (vector length, or side length for phase retrieval).
    #[arg(long)]
    pub d: Option<usize>,
    /// Rank.
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub d1: Option<usize>,
    #[arg(long)]
    pub d2: Option<usize>,
}

impl ProblemArgs {
    fn problem(&self) -> Result<Option<Problem>> {
        let need = |v: Option<usize>, name: &str| v.ok_or_else(|| Error::Config(format!("--{name} is required for this problem")));
        Ok(match self.problem {
            None => None,
            Some(ProblemKind::Sparse) => Some(Problem::SparseL1 { s: need(self.s, "s")?, d: need(self.d, "d")? }),
            Some(ProblemKind::LowRank) => Some(Problem::LowRankS1 { r: need(self.r, "r")?, d1: need(self.d1, "d1")?, d2: need(self.d2, "d2")? }),
            Some(ProblemKind::Phase) => Some(Problem::PhaseRetrieval { d: need(self.d, "d")? }),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnsembleKind {
    Gaussian,
    Rademacher,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConeKind {
    Full,
    Subspace,
    Explicit,
    SparseDescent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Net,
    Heuristic,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Squared Gaussian width of a descent cone: closed form, and a Monte
    /// Carlo estimate when `--trials` is given.
    Width(ProblemArgs),
    /// Small-ball lower bound on a random subspace cone.
    Smallball(SmallballArgs),
    /// Minimum conic singular value of a Gaussian operator.
    LambdaMin(LambdaArgs),
    /// Solve one recovery problem.
    Recover(RecoverArgs),
    /// Phase retrieval by trace minimization on one random instance.
    Phaselift(PhaseliftArgs),
    /// Phase-transition sweep over the m grid of a config file.
    Sweep,
    /// Error against noise level at the largest m of a config file.
    ErrorCurve,
}

#[derive(Debug, Args)]
pub struct SmallballArgs {
    #[arg(long, default_value_t = 20)]
    pub d: usize,
    /// Dimension of the subspace cone.
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    #[arg(long, default_value_t = 60)]
    pub m: usize,
    /// Thresholds; defaults to half the median of |N(0,1)|.
    #[arg(long, value_delimiter = ',')]
    pub xi: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 2.0])]
    pub t: Vec<f64>,
    #[arg(long, value_enum, default_value_t = EnsembleKind::Gaussian)]
    pub ensemble: EnsembleKind,
    #[arg(long, default_value_t = 200)]
    pub dirs: usize,
    #[arg(long, default_value_t = 20000)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct LambdaArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, value_enum, default_value_t = ConeKind::Full)]
    pub cone: ConeKind,
    /// Subspace dimension.
    #[arg(long)]
    pub k: Option<usize>,
    /// Sparsity of the reference point for `sparse-descent`.
    #[arg(long)]
    pub s: Option<usize>,
    /// Generators of an explicit cone, e.g. `1,0;0.5,1`.
    #[arg(long)]
    pub generators: Option<String>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long)]
    pub resolution: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RecoverArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub eta: Option<f64>,
    /// Write the estimate here, one value per line (column-major for matrices).
    #[arg(long)]
    pub estimate: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PhaseliftArgs {
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Write the estimate here, one value per line (column-major).
    #[arg(long)]
    pub estimate: Option<PathBuf>,
}

/// TOML layout of `recover` and `phaselift` configs.
///
/// ```toml
/// m = 60
/// eta = 0.0
/// seed = 1
/// operator = "phi.bin"        # optional; .csv selects the CSV layout
/// measurements = "y.csv"      # optional; one value per line
/// [problem]
/// kind = "sparse-l1"
/// s = 4
/// d = 128
/// [solver]
/// max_iters = 20000
/// ```
///
/// Without `operator`, a Gaussian instance is generated from the seed; without
/// `measurements`, a signal is drawn and measured, and the relative error is
/// reported.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecoverConfig {
    pub problem: Option<Problem>,
    pub ensemble: Option<EnsembleConfig>,
    pub m: Option<usize>,
    #[serde(default)]
    pub eta: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub solver: SolverOptions,
    pub operator: Option<PathBuf>,
    pub measurements: Option<PathBuf>,
}

impl RecoverConfig {
    fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    fn empty() -> Self {
        RecoverConfig { problem: None, ensemble: None, m: None, eta: 0.0, seed: 0, solver: SolverOptions::default(), operator: None, measurements: None }
    }
}

struct Output {
    table: Table,
    nonconverged: usize,
}

impl Output {
    fn ok(table: Table) -> Self {
        Output { table, nonconverged: 0 }
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    match execute(&cli) {
        Ok(result) => {
            let format = cli.global.format.into();
            let written = match &cli.global.out {
                Some(path) => result.table.write(path, format),
                None => out.write_all(result.table.render(format).as_bytes()).map_err(|source| Error::Io { path: "<stdout>".into(), source }),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return 1;
            }
            if cli.global.strict && result.nonconverged > 0 {
                let _ = writeln!(err, "error: {} solve(s) did not converge", result.nonconverged);
                return 2;
            }
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn execute(cli: &Cli) -> Result<Output> {
    let g = &cli.global;
    match &cli.command {
        Command::Width(p) => width_cmd(g, p),
        Command::Smallball(a) => smallball_cmd(g, a),
        Command::LambdaMin(a) => lambda_cmd(g, a),
        Command::Recover(a) => recover_cmd(g, a),
        Command::Phaselift(a) => phaselift_cmd(g, a),
        Command::Sweep => {
            let cfg = experiment_config(g)?;
            let r = harness::run_phase_transition(&cfg)?;
            let nonconverged = r.rows.iter().map(|row| row.nonconverged).sum();
            Ok(Output { table: r.to_table(), nonconverged })
        }
        Command::ErrorCurve => {
            let cfg = experiment_config(g)?;
            let c = harness::run_error_curve(&cfg)?;
            let nonconverged = c.rows.iter().map(|row| row.nonconverged).sum();
            Ok(Output { table: c.to_table(), nonconverged })
        }
    }
}

fn experiment_config(g: &GlobalArgs) -> Result<ExperimentConfig> {
    let path = g.config.as_ref().ok_or_else(|| Error::Config("this command needs --config".into()))?;
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(seed) = g.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = g.trials {
        cfg.trials = trials;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn width_cmd(g: &GlobalArgs, p: &ProblemArgs) -> Result<Output> {
    let problem = p.problem()?.ok_or_else(|| Error::Config("width needs --problem".into()))?;
    let seed = g.seed.unwrap_or(0);
    let mut table = Table::new(["value", "std_error", "trials", "method"]);
    let mut push = |e: &WidthEstimate| table.push(vec![e.value.into(), e.std_error.into(), e.trials.into(), e.method.label().into()]);
    let bound = harness::width_bound(&problem)?;
    if let Some(b) = bound {
        push(&WidthEstimate::closed_form(b));
    }
    let trials = match (g.trials, bound) {
        (Some(t), _) => Some(t),
        (None, None) => Some(width::DEFAULT_TRIALS),
        (None, Some(_)) => None,
    };
    if let Some(trials) = trials {
        let reference = harness::draw_signal(&problem, seed);
        let anchored = problem.regularizer().anchor(&reference)?;
        push(&width::mc_width_sq_descent(&anchored, trials, seed)?);
    }
    Ok(Output::ok(table))
}

fn ensemble_spec(kind: EnsembleKind, seed: u64) -> Result<EnsembleSpec> {
    match kind {
        EnsembleKind::Gaussian => Ok(EnsembleSpec::gaussian()),
        EnsembleKind::Rademacher => EnsembleConfig::Bounded { atom: harness::AtomKind::Rademacher, bound: None, alpha: None }.spec(seed),
    }
}

fn random_subspace(d: usize, k: usize, seed: u64) -> Result<ConeDescriptor> {
    if k == 0 || k > d {
        return Err(Error::Config(format!("need 1 <= k <= d, got k={k}, d={d}")));
    }
    let mut r = rng::stream(rng::derive_seed(seed, tag::DIRECTION, 0, 0), tag::DIRECTION, 0);
    ConeDescriptor::subspace(&DMatrix::from_fn(d, k, |_, _| rng::gaussian(&mut r)))
}

fn smallball_cmd(g: &GlobalArgs, a: &SmallballArgs) -> Result<Output> {
    let seed = g.seed.unwrap_or(0);
    let trials = g.trials.unwrap_or(500);
    let spec = ensemble_spec(a.ensemble, seed)?;
    let cone = random_subspace(a.d, a.k, seed)?;
    let xis = if a.xi.is_empty() {
        vec![0.5 * statrs::distribution::ContinuousCDF::inverse_cdf(&statrs::distribution::Normal::standard(), 0.75)]
    } else {
        a.xi.clone()
    };
    let doubled: Vec<f64> = xis.iter().map(|x| 2.0 * x).collect();
    let sampler = |r: &mut rng::StreamRng| cone.sample_unit(r);
    let tails = smallball::estimate_marginal_tails(&spec, a.d, &sampler, &doubled, a.dirs, a.samples, seed)?;
    let w = smallball::estimate_mean_empirical_width(&spec, &cone, a.d, a.m, trials, seed)?;
    let mut table = Table::new(["xi", "m", "q_hat_min", "q_hat_mean", "w_hat", "bound", "t", "confidence"]);
    for (xi, tail) in xis.iter().zip(&tails) {
        for &t in &a.t {
            let bound = smallball::small_ball_lower_bound(*xi, a.m, tail.q_hat, w.w_hat, t);
            table.push(vec![
                (*xi).into(),
                a.m.into(),
                tail.q_hat.into(),
                tail.q_hat_mean.into(),
                w.w_hat.into(),
                bound.into(),
                t.into(),
                smallball::small_ball_confidence(t).into(),
            ]);
        }
    }
    table.meta("seed", seed).meta("ensemble", spec.name()).meta("cone", format!("subspace:{}", a.k)).meta("d", a.d);
    Ok(Output::ok(table))
}

fn parse_generators(text: &str) -> Result<Vec<DVector<f64>>> {
    text.split(';')
        .map(|g| {
            g.split(',')
                .map(|v| v.trim().parse::<f64>().map_err(|e| Error::Config(format!("bad generator entry {v:?}: {e}"))))
                .collect::<Result<Vec<_>>>()
                .map(DVector::from_vec)
        })
        .collect()
}

fn lambda_cmd(g: &GlobalArgs, a: &LambdaArgs) -> Result<Output> {
    let seed = g.seed.unwrap_or(0);
    let op = measure::gaussian_ensemble(a.m, a.d, seed)?;
    let cone = match a.cone {
        ConeKind::Full => ConeDescriptor::full_space(a.d)?,
        ConeKind::Subspace => random_subspace(a.d, a.k.ok_or_else(|| Error::Config("--k is required for subspace cones".into()))?, seed)?,
        ConeKind::Explicit => {
            let gens = parse_generators(a.generators.as_deref().ok_or_else(|| Error::Config("--generators is required for explicit cones".into()))?)?;
            ConeDescriptor::explicit(gens)?
        }
        ConeKind::SparseDescent => {
            let s = a.s.ok_or_else(|| Error::Config("--s is required for sparse-descent cones".into()))?;
            let problem = Problem::SparseL1 { s, d: a.d };
            let x = harness::draw_signal(&problem, seed);
            ConeDescriptor::descent(problem.regularizer().anchor(&x)?)
        }
    };
    let opts = LambdaOptions {
        mode: a.mode.map(|m| match m {
            ModeArg::Exact => LambdaMode::Exact,
            ModeArg::Net => LambdaMode::Net,
            ModeArg::Heuristic => LambdaMode::Heuristic,
        }),
        resolution: a.resolution,
        seed,
        ..LambdaOptions::default()
    };
    let l = conic::lambda_min_empirical(&op, &cone, &opts)?;
    let mut table = Table::new(["value", "lower", "mode", "resolution", "status"]);
    table.meta("seed", seed).meta("cone", cone.kind_name()).meta("d", a.d).meta("m", a.m);
    table.push(vec![l.value.into(), l.lower.into(), l.mode.label().into(), l.resolution.into(), l.status().into()]);
    Ok(Output::ok(table))
}

fn read_column(path: &Path) -> Result<DVector<f64>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.parse::<f64>().map_err(|e| Error::Config(format!("{}: bad value {l:?}: {e}", path.display()))))
        .collect::<Result<Vec<_>>>()
        .map(DVector::from_vec)
}

fn write_column(path: &Path, v: &DVector<f64>) -> Result<()> {
    let text: String = v.iter().map(|x| format!("{x:?}\n")).collect();
    std::fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn recovery_table(problem: &Problem, m: usize, seed: u64, res: &RecoveryResult, rel_error: Option<f64>) -> Table {
    let mut t = Table::new([
        "problem",
        "m",
        "seed",
        "status",
        "converged",
        "iterations",
        "objective",
        "residual_norm",
        "constraint_violation",
        "rel_error",
    ]);
    t.push(vec![
        problem.name().into(),
        m.into(),
        seed.into(),
        res.status.label().into(),
        res.converged.into(),
        res.iterations.into(),
        res.objective.into(),
        res.residual_norm.into(),
        res.constraint_violation.into(),
        rel_error.into(),
    ]);
    t
}

/// Loads or generates the operator and data of a single solve.
fn single_instance(cfg: &RecoverConfig, problem: &Problem) -> Result<(MeasurementOperator, DVector<f64>, Option<DVector<f64>>)> {
    let op = match &cfg.operator {
        Some(path) if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) => measure::io::read_csv(path)?,
        Some(path) => measure::io::read_binary(path)?,
        None => {
            let m = cfg.m.ok_or_else(|| Error::Config("m is required without an operator file".into()))?;
            let ensemble = cfg.ensemble.unwrap_or(match problem {
                Problem::PhaseRetrieval { .. } => EnsembleConfig::LiftedGaussian,
                _ => EnsembleConfig::Gaussian,
            });
            harness::make_instance(problem, &ensemble.spec(cfg.seed)?, m, cfg.seed, cfg.seed)?.operator
        }
    };
    let op = match (*problem, op.shape()) {
        (Problem::LowRankS1 { d1, d2, .. }, measure::SignalShape::Vector(_)) => op.with_matrix_shape(d1, d2)?,
        _ => op,
    };
    if op.shape() != problem.shape() {
        return Err(Error::Config(format!("operator acts on {:?}, problem needs {:?}", op.shape(), problem.shape())));
    }
    match &cfg.measurements {
        Some(path) => Ok((op, read_column(path)?, None)),
        None => {
            let truth = harness::draw_signal(problem, cfg.seed);
            let y = measure::measure_with_noise(&op, &truth, &Noise::Sphere { eta: cfg.eta, seed: cfg.seed })?;
            Ok((op, y, Some(truth)))
        }
    }
}

fn solve_single(g: &GlobalArgs, mut cfg: RecoverConfig, problem: Problem, estimate: Option<&Path>) -> Result<Output> {
    if let Some(seed) = g.seed {
        cfg.seed = seed;
    }
    let (op, y, truth) = single_instance(&cfg, &problem)?;
    let res = match problem {
        Problem::PhaseRetrieval { .. } => solve::phase_retrieval_sdp(&op, &y, &cfg.solver)?,
        _ => solve::recover_constrained(&problem.regularizer(), &op, &y, cfg.eta, &cfg.solver)?,
    };
    if let Some(path) = estimate {
        write_column(path, &res.estimate)?;
    }
    let rel = truth.map(|x| (&res.estimate - &x).norm() / x.norm());
    let mut table = recovery_table(&problem, op.m(), cfg.seed, &res, rel);
    if let Problem::PhaseRetrieval { d } = problem {
        let (_, top) = solve::extract_rank1(&crate::linalg::mat_from_vec(&res.estimate, d, d))?;
        table.header.push("top_eigenvalue".into());
        table.rows[0].push(Cell::Float(top));
    }
    Ok(Output { table, nonconverged: usize::from(!res.converged) })
}

fn recover_cmd(g: &GlobalArgs, a: &RecoverArgs) -> Result<Output> {
    let mut cfg = match &g.config {
        Some(path) => RecoverConfig::load(path)?,
        None => RecoverConfig::empty(),
    };
    if let Some(p) = a.problem.problem()? {
        cfg.problem = Some(p);
    }
    cfg.m = a.m.or(cfg.m);
    cfg.eta = a.eta.unwrap_or(cfg.eta);
    let problem = cfg.problem.ok_or_else(|| Error::Config("recover needs a problem (--problem or [problem] in the config)".into()))?;
    solve_single(g, cfg, problem, a.estimate.as_deref())
}

fn phaselift_cmd(g: &GlobalArgs, a: &PhaseliftArgs) -> Result<Output> {
    let mut cfg = match &g.config {
        Some(path) => RecoverConfig::load(path)?,
        None => RecoverConfig::empty(),
    };
    let d = match (a.d, cfg.problem) {
        (Some(d), _) => d,
        (None, Some(Problem::PhaseRetrieval { d })) => d,
        (None, Some(other)) => return Err(Error::Config(format!("phaselift cannot run a {} problem", other.name()))),
        (None, None) => return Err(Error::Config("phaselift needs --d".into())),
    };
    cfg.problem = Some(Problem::PhaseRetrieval { d });
    cfg.m = Some(a.m.or(cfg.m).unwrap_or(8 * d));
    if cfg.eta != 0.0 {
        return Err(Error::Config("phase retrieval is noiseless; eta must be 0".into()));
    }
    solve_single(g, cfg, Problem::PhaseRetrieval { d }, a.estimate.as_deref())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("conic-recovery").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn width_closed_form() {
        let (code, out, _) = run_args(&["width", "--problem", "sparse", "--s", "5", "--d", "100"]);
        assert_eq!(code, 0);
        let row = out.lines().nth(1).unwrap();
        let v: f64 = row.split(',').next().unwrap().parse().unwrap();
        assert!((v - 39.957).abs() < 1e-3);
        assert!(row.ends_with(",0.0,0,closed-form-bound"));
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_args(&["frobnicate"]).0, 1);
        assert_eq!(run_args(&["width", "--bogus"]).0, 1);
        assert_eq!(run_args(&["width"]).0, 1);
        let (code, _, err) = run_args(&["sweep", "--config", "/nonexistent/missing.cfg"]);
        assert_eq!(code, 1);
        assert!(err.contains("missing.cfg"));
    }

    #[test]
    fn version_and_help_exit_zero() {
        let (code, out, _) = run_args(&["--version"]);
        assert_eq!(code, 0);
        assert!(out.contains(env!("CARGO_PKG_VERSION")));
        assert_eq!(run_args(&["--help"]).0, 0);
    }

    #[test]
    fn phaselift_small() {
        let (code, out, _) = run_args(&["phaselift", "--d", "2", "--m", "3", "--seed", "1"]);
        assert_eq!(code, 0);
        let mut r = csv::Reader::from_reader(out.as_bytes());
        let headers = r.headers().unwrap().clone();
        let rec = r.records().next().unwrap().unwrap();
        let col = |n: &str| rec[headers.iter().position(|h| h == n).unwrap()].to_string();
        assert!(col("residual_norm").parse::<f64>().unwrap() <= 1e-6);
        assert_eq!(col("converged"), "true");
    }
}
