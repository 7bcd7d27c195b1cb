//! Seeded phase-transition sweeps and error-versus-noise curves.
//!
//! Every `(m, trial)` cell draws its operator, signal and noise from a seed
//! derived from the experiment seed and the cell indices, so cells run in
//! parallel and the merged result depends only on the configuration.

mod config;
mod output;

pub use config::{AtomKind, EnsembleConfig, ExperimentConfig, MGrid, Problem};
pub use output::{Cell, Format, Table};

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::conic;
use crate::error::{Error, Result};
use crate::linalg;
use crate::measure::{measure_with_noise, EnsembleSpec, MeasurementOperator, Noise};
use crate::rng::{self, tag};
use crate::solve::{self, RecoveryResult};
use crate::stats;
use crate::width::{self, WidthEstimate};

/// One randomly generated recovery problem.
#[derive(Debug, Clone)]
pub struct Instance {
    pub operator: MeasurementOperator,
    /// Flat ground truth; `x x^T` for phase retrieval.
    pub truth: DVector<f64>,
    /// Noise direction of unit norm (zero for phase retrieval).
    pub noise_direction: DVector<f64>,
}

impl Instance {
    /// Data `y = A x + eta * e` with the instance's noise direction.
    pub fn data(&self, eta: f64) -> Result<DVector<f64>> {
        let e = &self.noise_direction * eta;
        measure_with_noise(&self.operator, &self.truth, &Noise::Vector { e, eta: None })
    }

    pub fn solve(&self, problem: &Problem, eta: f64, opts: &solve::SolverOptions) -> Result<RecoveryResult> {
        let y = self.data(eta)?;
        match problem {
            Problem::PhaseRetrieval { .. } => solve::phase_retrieval_sdp(&self.operator, &y, opts),
            _ => solve::recover_constrained(&problem.regularizer(), &self.operator, &y, eta, opts),
        }
    }
}

/// Draws a signal of the problem's structure from `seed`: a `+-1` vector on
/// a uniformly random support, a product of Gaussian factors, or a uniformly
/// random unit vector lifted to `x x^T`.
pub fn draw_signal(problem: &Problem, seed: u64) -> DVector<f64> {
    let mut r = rng::stream(seed, tag::SIGNAL, 0);
    match *problem {
        Problem::SparseL1 { s, d } => {
            let mut x = DVector::zeros(d);
            for i in rand::seq::index::sample(&mut r, d, s) {
                x[i] = rng::rademacher(&mut r);
            }
            x
        }
        Problem::LowRankS1 { r: k, d1, d2 } => {
            let l = DMatrix::from_fn(d1, k, |_, _| rng::gaussian(&mut r));
            let rt = DMatrix::from_fn(d2, k, |_, _| rng::gaussian(&mut r));
            linalg::vec_from_mat(&(l * rt.transpose()))
        }
        Problem::PhaseRetrieval { d } => {
            let g = rng::gaussian_vec(&mut r, d);
            let x = &g / g.norm();
            linalg::vec_from_mat(&(&x * x.transpose()))
        }
    }
}

/// Builds the instance of one cell.
pub fn make_instance(problem: &Problem, spec: &EnsembleSpec, m: usize, cell_seed: u64, signal_seed: u64) -> Result<Instance> {
    let truth = draw_signal(problem, signal_seed);
    let operator = match *problem {
        Problem::SparseL1 { d, .. } => MeasurementOperator::sample(spec.clone(), m, d, cell_seed)?,
        Problem::LowRankS1 { d1, d2, .. } => MeasurementOperator::sample(spec.clone(), m, d1 * d2, cell_seed)?.with_matrix_shape(d1, d2)?,
        Problem::PhaseRetrieval { d } => MeasurementOperator::sample(spec.clone(), m, d, cell_seed)?,
    };
    let noise_direction = match problem {
        Problem::PhaseRetrieval { .. } => DVector::zeros(m),
        _ => crate::measure::noise_vector(m, &Noise::Sphere { eta: 1.0, seed: cell_seed })?,
    };
    Ok(Instance { operator, truth, noise_direction })
}

fn cell_seed(seed: u64, mi: usize, trial: usize) -> u64 {
    rng::derive_seed(seed, tag::CELL, mi as u64, trial as u64)
}

fn signal_seed(cfg: &ExperimentConfig, cell: u64) -> u64 {
    if cfg.fixed_signal {
        rng::derive_seed(cfg.seed, tag::SIGNAL, 0, 0)
    } else {
        cell
    }
}

/// Closed-form squared width bound of the problem's descent cone, when one
/// is known.
pub fn width_bound(problem: &Problem) -> Result<Option<f64>> {
    match *problem {
        Problem::SparseL1 { s, d } => width::sparse_width_bound(s, d).map(Some),
        Problem::LowRankS1 { r, d1, d2 } => width::rank_width_bound(r, d1, d2).map(Some),
        Problem::PhaseRetrieval { .. } => Ok(None),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub m: usize,
    pub successes: usize,
    /// Runs that stopped without converging (always counted as failures).
    pub nonconverged: usize,
    pub trials: usize,
    pub success_rate: f64,
    pub mean_rel_error: f64,
    pub mean_iters: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepMetadata {
    pub config_hash: String,
    pub seed: u64,
    pub problem: String,
    pub ensemble: String,
    pub eta: f64,
    pub success_threshold: f64,
    /// Closed-form bound on the squared width.
    pub width_bound: Option<f64>,
    /// `ceil(w^2 + C w)` from the closed-form bound.
    pub predicted_m: Option<u64>,
    /// Monte Carlo squared width at a representative signal.
    pub mc_width_sq: WidthEstimate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub metadata: SweepMetadata,
}

impl SweepResult {
    pub fn success_rates(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.success_rate).collect()
    }

    pub fn row(&self, m: usize) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.m == m)
    }

    pub fn fifty_percent_point(&self) -> Option<f64> {
        let ms: Vec<f64> = self.rows.iter().map(|r| r.m as f64).collect();
        fifty_percent_point(&ms, &self.success_rates())
    }

    pub fn isotonic_violation(&self) -> f64 {
        let w: Vec<f64> = self.rows.iter().map(|r| r.trials as f64).collect();
        isotonic_violation(&self.success_rates(), &w)
    }

    pub fn to_table(&self) -> Table {
        let md = &self.metadata;
        let mut t = Table::new(["m", "successes", "nonconverged", "trials", "success_rate", "mean_rel_error", "mean_iters"]);
        t.meta("config_hash", md.config_hash.as_str())
            .meta("seed", md.seed)
            .meta("problem", md.problem.as_str())
            .meta("ensemble", md.ensemble.as_str())
            .meta("eta", md.eta)
            .meta("success_threshold", md.success_threshold)
            .meta("width_sq_bound", md.width_bound)
            .meta("predicted_m", md.predicted_m)
            .meta("mc_width_sq", md.mc_width_sq.value)
            .meta("mc_width_sq_std_error", md.mc_width_sq.std_error)
            .meta("fifty_percent_m", self.fifty_percent_point());
        for r in &self.rows {
            t.push(vec![
                r.m.into(),
                r.successes.into(),
                r.nonconverged.into(),
                r.trials.into(),
                r.success_rate.into(),
                r.mean_rel_error.into(),
                r.mean_iters.into(),
            ]);
        }
        t
    }
}

struct CellOutcome {
    success: bool,
    converged: bool,
    rel_error: f64,
    iterations: usize,
}

fn mc_width(cfg: &ExperimentConfig) -> Result<WidthEstimate> {
    let reference = draw_signal(&cfg.problem, rng::derive_seed(cfg.seed, tag::SIGNAL, 0, 0));
    let anchored = cfg.problem.regularizer().anchor(&reference)?;
    width::mc_width_sq_descent(&anchored, cfg.mc_width_trials, rng::derive_seed(cfg.seed, tag::PROBE, 0, 0))
}

/// Solves `trials` fresh instances at every `m` of the grid and tallies
/// successes (converged with relative error at most the threshold).
pub fn run_phase_transition(cfg: &ExperimentConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let spec = cfg.ensemble().spec(cfg.seed)?;
    let grid = cfg.m_grid.values();
    let cells: Vec<(usize, usize)> = (0..grid.len()).flat_map(|mi| (0..cfg.trials).map(move |t| (mi, t))).collect();
    let outcomes = cells
        .par_iter()
        .map(|&(mi, t)| -> Result<CellOutcome> {
            let cs = cell_seed(cfg.seed, mi, t);
            let inst = make_instance(&cfg.problem, &spec, grid[mi], cs, signal_seed(cfg, cs))?;
            let res = inst.solve(&cfg.problem, cfg.eta, &cfg.solver)?;
            let rel_error = (&res.estimate - &inst.truth).norm() / inst.truth.norm();
            Ok(CellOutcome {
                success: res.converged && rel_error <= cfg.success_threshold,
                converged: res.converged,
                rel_error,
                iterations: res.iterations,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let rows = grid
        .iter()
        .zip(outcomes.chunks(cfg.trials))
        .map(|(&m, chunk)| {
            let n = chunk.len() as f64;
            let successes = chunk.iter().filter(|c| c.success).count();
            SweepRow {
                m,
                successes,
                nonconverged: chunk.iter().filter(|c| !c.converged).count(),
                trials: chunk.len(),
                success_rate: successes as f64 / n,
                mean_rel_error: chunk.iter().map(|c| c.rel_error).sum::<f64>() / n,
                mean_iters: chunk.iter().map(|c| c.iterations as f64).sum::<f64>() / n,
            }
        })
        .collect();

    let bound = width_bound(&cfg.problem)?;
    let predicted_m = bound.map(|w2| width::sample_complexity_gaussian(w2.sqrt(), cfg.margin)).transpose()?;
    Ok(SweepResult {
        rows,
        metadata: SweepMetadata {
            config_hash: cfg.hash(),
            seed: cfg.seed,
            problem: cfg.problem.name().to_string(),
            ensemble: spec.name(),
            eta: cfg.eta,
            success_threshold: cfg.success_threshold,
            width_bound: bound,
            predicted_m,
            mc_width_sq: mc_width(cfg)?,
        },
    })
}

/// Linear interpolation of the first upward crossing of 1/2 between
/// bracketing grid points; `None` when the rates never cross.
pub fn fifty_percent_point(ms: &[f64], rates: &[f64]) -> Option<f64> {
    let pairs: Vec<(f64, f64)> = ms.iter().copied().zip(rates.iter().copied()).collect();
    pairs.windows(2).find(|w| w[0].1 < 0.5 && w[1].1 >= 0.5).map(|w| {
        let ((m0, r0), (m1, r1)) = (w[0], w[1]);
        m0 + (0.5 - r0) / (r1 - r0) * (m1 - m0)
    })
}

/// Weighted nondecreasing least-squares fit (pool adjacent violators).
pub fn isotonic_fit(values: &[f64], weights: &[f64]) -> Vec<f64> {
    // Blocks of (mean, weight, count).
    let mut blocks: Vec<(f64, f64, usize)> = Vec::with_capacity(values.len());
    for (&v, &w) in values.iter().zip(weights) {
        blocks.push((v, w, 1));
        while blocks.len() > 1 && blocks[blocks.len() - 2].0 > blocks[blocks.len() - 1].0 {
            let (v2, w2, c2) = blocks.pop().expect("two blocks");
            let (v1, w1, c1) = blocks.pop().expect("two blocks");
            let w = w1 + w2;
            blocks.push(((v1 * w1 + v2 * w2) / w, w, c1 + c2));
        }
    }
    blocks.into_iter().flat_map(|(v, _, c)| std::iter::repeat_n(v, c)).collect()
}

/// Total absolute deviation of `values` from their isotonic fit; zero
/// exactly when the sequence is nondecreasing.
pub fn isotonic_violation(values: &[f64], weights: &[f64]) -> f64 {
    isotonic_fit(values, weights).iter().zip(values).map(|(f, v)| (f - v).abs()).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRow {
    pub eta: f64,
    pub trials: usize,
    pub mean_error: f64,
    pub max_error: f64,
    /// Mean of the per-instance bounds `2 eta / lambda`.
    pub mean_bound: f64,
    /// Instances whose error exceeds their own bound.
    pub violations: usize,
    pub nonconverged: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorCurve {
    pub m: usize,
    /// `true` when every `lambda` is a certified lower bound on the minimum
    /// conic singular value (the smallest singular value of a square or tall
    /// operator); otherwise it is the Gordon prediction `sqrt(m-1) - w - t`.
    pub certified: bool,
    pub lambdas: Vec<f64>,
    pub rows: Vec<ErrorRow>,
    pub config_hash: String,
    pub seed: u64,
}

impl ErrorCurve {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["eta", "trials", "mean_error", "max_error", "mean_bound", "violations", "nonconverged"]);
        let (lam, _) = stats::mean_and_se(&self.lambdas);
        t.meta("config_hash", self.config_hash.as_str())
            .meta("seed", self.seed)
            .meta("m", self.m)
            .meta("lambda_certified", self.certified)
            .meta("mean_lambda", lam);
        for r in &self.rows {
            t.push(vec![
                r.eta.into(),
                r.trials.into(),
                r.mean_error.into(),
                r.max_error.into(),
                r.mean_bound.into(),
                r.violations.into(),
                r.nonconverged.into(),
            ]);
        }
        t
    }
}

/// Observed error against the deterministic bound `2 eta / lambda` at the
/// largest `m` of the grid. Each trial fixes one instance (operator, signal,
/// noise direction) and rescales the noise across `eta_grid` (or the single
/// configured `eta`); the solver is given the true noise norm.
pub fn run_error_curve(cfg: &ExperimentConfig) -> Result<ErrorCurve> {
    cfg.validate()?;
    if matches!(cfg.problem, Problem::PhaseRetrieval { .. }) {
        return Err(Error::Config("error curves need a noisy linear problem, not phase retrieval".into()));
    }
    let etas = if cfg.eta_grid.is_empty() { vec![cfg.eta] } else { cfg.eta_grid.clone() };
    let spec = cfg.ensemble().spec(cfg.seed)?;
    let grid = cfg.m_grid.values();
    let mi = grid.len() - 1;
    let m = grid[mi];
    let n = cfg.problem.regularizer().signal_len();
    let certified = m >= n;
    let gordon = {
        let w = width_bound(&cfg.problem)?.expect("linear problems have a width bound").sqrt();
        width::gordon_lower_bound(m, w, cfg.gordon_t)
    };

    let per_trial = (0..cfg.trials)
        .into_par_iter()
        .map(|t| -> Result<(f64, Vec<(f64, bool)>)> {
            let cs = cell_seed(cfg.seed, mi, t);
            let inst = make_instance(&cfg.problem, &spec, m, cs, signal_seed(cfg, cs))?;
            let lambda = if certified { linalg::min_singular_value(&inst.operator.flat_matrix())? } else { gordon };
            let errs = etas
                .iter()
                .map(|&eta| {
                    let res = inst.solve(&cfg.problem, eta, &cfg.solver)?;
                    Ok(((&res.estimate - &inst.truth).norm(), res.converged))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((lambda, errs))
        })
        .collect::<Result<Vec<_>>>()?;

    let lambdas: Vec<f64> = per_trial.iter().map(|(l, _)| *l).collect();
    let rows = etas
        .iter()
        .enumerate()
        .map(|(k, &eta)| -> Result<ErrorRow> {
            let mut errors = Vec::with_capacity(per_trial.len());
            let mut bounds = Vec::with_capacity(per_trial.len());
            let mut violations = 0;
            let mut nonconverged = 0;
            for (lambda, errs) in &per_trial {
                let (err, conv) = errs[k];
                let bound = conic::deterministic_error_bound(eta, *lambda)?;
                // Solver accuracy allowance: the stopping rule is relative 1e-8.
                if err > bound + 1e-6 * (1.0 + bound) {
                    violations += 1;
                }
                nonconverged += usize::from(!conv);
                errors.push(err);
                bounds.push(bound);
            }
            Ok(ErrorRow {
                eta,
                trials: errors.len(),
                mean_error: stats::mean_and_se(&errors).0,
                max_error: errors.iter().copied().fold(0.0, f64::max),
                mean_bound: stats::mean_and_se(&bounds).0,
                violations,
                nonconverged,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrorCurve { m, certified, lambdas, rows, config_hash: cfg.hash(), seed: cfg.seed })
}

/// Writes a table as CSV.
pub fn emit_csv(table: &Table, path: &Path) -> Result<()> {
    table.write(path, Format::Csv)
}
