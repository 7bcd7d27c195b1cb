//! Recovery by convex programming.
//!
//! Both programs are `minimize f(x) subject to x in B` with `B` a residual
//! ball `{x : |A x - y| <= eta}` (an affine set when `eta = 0`). They are
//! solved by scaled ADMM on the splitting `f(x) + 1_B(z)`, `x = z`:
//!
//! ```text
//! x <- prox_{f / rho}(z - u)
//! z <- P_B(x + u)
//! u <- u + x - z
//! ```
//!
//! Both steps are exact: the prox maps come from [`crate::reg`] and the
//! projection onto `B` from a one-time SVD of `A`. The penalty starts at
//! `rho` and is doubled or halved every `rescale_every` iterations when the
//! normalized primal and dual residuals are out of balance by more than 10x,
//! for the first ten checks only. After that the penalty stays fixed, which
//! restores the convergence guarantee of ADMM with a constant penalty.

mod ball;

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{ensure_len, Error, Result};
use crate::linalg::{self, mat_from_vec};
use crate::measure::{MeasurementOperator, SignalShape};
use crate::reg::Regularizer;
use crate::rng::{self, tag};
use ball::BallProjector;

/// Iterations of constraint-violation history kept on the result.
pub const HISTORY_LEN: usize = 50;
/// Window over which a non-converged run must reduce its primal residual by
/// 1% to not count as stalled.
const STALL_WINDOW: usize = 1000;
/// Number of penalty rebalancing checks before the penalty is frozen.
const RESCALE_CHECKS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverOptions {
    pub max_iters: usize,
    pub tol_primal: f64,
    pub tol_dual: f64,
    /// Initial ADMM penalty.
    pub rho: f64,
    pub rescale_every: usize,
    /// `None` starts from the projection of 0 onto the constraint set;
    /// `Some(seed)` from the projection of a seeded Gaussian point.
    pub seed: Option<u64>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { max_iters: 20_000, tol_primal: 1e-8, tol_dual: 1e-8, rho: 1.0, rescale_every: 100, seed: None }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidArgument("max_iters must be at least 1".into()));
        }
        if !(self.tol_primal > 0.0 && self.tol_dual > 0.0) {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return Err(Error::InvalidArgument("penalty must be positive and finite".into()));
        }
        if self.rescale_every == 0 {
            return Err(Error::InvalidArgument("rescale_every must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Converged,
    MaxIterations,
    /// Not converged, and the primal residual stopped decreasing while still
    /// large: the typical signature of an infeasible program.
    Stalled,
}

impl SolveStatus {
    pub fn label(&self) -> &'static str {
        match self {
            SolveStatus::Converged => "converged",
            SolveStatus::MaxIterations => "max-iterations",
            SolveStatus::Stalled => "stalled",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RecoveryResult {
    /// Flat signal (column-major for matrices).
    pub estimate: DVector<f64>,
    pub objective: f64,
    /// `|A x - y|` at the estimate.
    pub residual_norm: f64,
    /// `max_i |(A x)_i - y_i|` at the estimate.
    pub constraint_violation: f64,
    pub iterations: usize,
    pub converged: bool,
    pub status: SolveStatus,
    pub primal_residual: f64,
    pub dual_residual: f64,
    /// Constraint violation of the returned iterate over the final
    /// iterations, oldest first.
    pub violation_history: Vec<f64>,
}

/// `minimize f(x) subject to |A x - y| <= eta`.
///
/// The returned estimate is the projected iterate `z`, which satisfies the
/// constraint exactly (up to rounding) at every iteration.
pub fn recover_constrained(f: &Regularizer, op: &MeasurementOperator, y: &DVector<f64>, eta: f64, opts: &SolverOptions) -> Result<RecoveryResult> {
    opts.validate()?;
    ensure_len(op.signal_len(), f.signal_len())?;
    ensure_len(op.m(), y.len())?;
    let a = op.flat_matrix();
    let ball = BallProjector::new(&a, y, eta)?;
    let out = admm(f, &ball, opts, Tracked::Z, |x| (ball.residual_norm(x) - ball.eta()).max(0.0))?;
    let estimate = out.z;
    let resid = &a * &estimate - y;
    Ok(RecoveryResult {
        objective: f.value(&estimate)?,
        residual_norm: resid.norm(),
        constraint_violation: resid.amax(),
        estimate,
        iterations: out.iterations,
        converged: out.status == SolveStatus::Converged,
        status: out.status,
        primal_residual: out.primal,
        dual_residual: out.dual,
        violation_history: out.history,
    })
}

/// `minimize trace(X) subject to X PSD, psi_i^T X psi_i = y_i`.
///
/// The returned estimate is the prox iterate, which is exactly PSD; its
/// constraint violation is reported.
pub fn phase_retrieval_sdp(op: &MeasurementOperator, y: &DVector<f64>, opts: &SolverOptions) -> Result<RecoveryResult> {
    opts.validate()?;
    let SignalShape::Symmetric(d) = op.shape() else {
        return Err(Error::InvalidArgument("phase retrieval needs a lifted rank-one operator".into()));
    };
    ensure_len(op.m(), y.len())?;
    if let Some(bad) = y.iter().find(|v| !(**v >= 0.0)) {
        return Err(Error::InvalidArgument(format!("magnitude measurements must be nonnegative, got {bad}")));
    }
    let f = Regularizer::trace_psd(d);
    let a = op.flat_matrix();
    let ball = BallProjector::new(&a, y, 0.0)?;
    let out = admm(&f, &ball, opts, Tracked::X, |x| (&a * x - y).amax())?;
    let estimate = linalg::vec_from_mat(&linalg::symmetrize(&mat_from_vec(&out.x, d, d)));
    let resid = &a * &estimate - y;
    Ok(RecoveryResult {
        objective: mat_from_vec(&estimate, d, d).trace(),
        residual_norm: resid.norm(),
        constraint_violation: resid.amax(),
        estimate,
        iterations: out.iterations,
        converged: out.status == SolveStatus::Converged,
        status: out.status,
        primal_residual: out.primal,
        dual_residual: out.dual,
        violation_history: out.history,
    })
}

struct AdmmOutput {
    x: DVector<f64>,
    z: DVector<f64>,
    iterations: usize,
    status: SolveStatus,
    primal: f64,
    dual: f64,
    history: Vec<f64>,
}

/// Which iterate the caller returns, and so which one the violation history
/// follows.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Tracked {
    X,
    Z,
}

fn admm(
    f: &Regularizer,
    ball: &BallProjector,
    opts: &SolverOptions,
    tracked: Tracked,
    violation: impl Fn(&DVector<f64>) -> f64,
) -> Result<AdmmOutput> {
    let n = f.signal_len();
    let start = match opts.seed {
        None => DVector::zeros(n),
        Some(seed) => f.sample_ambient_gaussian(&mut rng::stream(seed, tag::PROBE, 0)),
    };
    let mut z = ball.project(&start);
    let mut u = DVector::zeros(n);
    let mut x = z.clone();
    let mut rho = opts.rho;
    let mut history = VecDeque::with_capacity(HISTORY_LEN);
    let mut window_start = f64::INFINITY;
    let (mut primal, mut dual) = (f64::INFINITY, f64::INFINITY);
    let mut scale_p = 1.0;
    for k in 1..=opts.max_iters {
        x = f.prox(&(&z - &u), 1.0 / rho)?;
        let z_old = std::mem::replace(&mut z, ball.project(&(&x + &u)));
        u += &x - &z;
        primal = (&x - &z).norm();
        dual = rho * (&z - &z_old).norm();
        scale_p = x.norm().max(z.norm()).max(1.0);
        let eps_p = opts.tol_primal * scale_p;
        let eps_d = opts.tol_dual * (rho * u.norm()).max(1.0);
        if history.len() == HISTORY_LEN {
            history.pop_front();
        }
        history.push_back(violation(if tracked == Tracked::X { &x } else { &z }));
        if primal <= eps_p && dual <= eps_d {
            return Ok(AdmmOutput { x, z, iterations: k, status: SolveStatus::Converged, primal, dual, history: history.into() });
        }
        if k % opts.rescale_every == 0 && k <= RESCALE_CHECKS * opts.rescale_every {
            let (rp, rd) = (primal / eps_p, dual / eps_d);
            if rp > 10.0 * rd {
                rho *= 2.0;
                u /= 2.0;
            } else if rd > 10.0 * rp {
                rho /= 2.0;
                u *= 2.0;
            }
        }
        if k + STALL_WINDOW == opts.max_iters {
            window_start = primal;
        }
    }
    let stalled = primal > 1e-6 * scale_p && primal > 0.99 * window_start;
    let status = if stalled { SolveStatus::Stalled } else { SolveStatus::MaxIterations };
    Ok(AdmmOutput { x, z, iterations: opts.max_iters, status, primal, dual, history: history.into() })
}

/// Best rank-one factor `x = sqrt(lambda_1) v_1` of a PSD matrix, with the
/// sign chosen so the largest-magnitude entry is positive, and the relative
/// residual `|X - x x^T|_F / |X|_F`.
pub fn extract_rank1(x: &DMatrix<f64>) -> Result<(DVector<f64>, f64)> {
    let d = x.nrows();
    if x.ncols() != d {
        return Err(Error::Dimension("rank-one extraction needs a square matrix".into()));
    }
    let norm = x.norm();
    if norm == 0.0 {
        return Ok((DVector::zeros(d), 0.0));
    }
    let (vals, vecs) = linalg::sym_eigen(x)?;
    if vals[0] <= 0.0 {
        return Ok((DVector::zeros(d), 1.0));
    }
    let mut v = vecs.column(0) * vals[0].sqrt();
    let imax = v.iamax();
    if v[imax] < 0.0 {
        v = -v;
    }
    let residual = (x - &v * v.transpose()).norm() / norm;
    Ok((v, residual))
}
