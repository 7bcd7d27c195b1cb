//! Conic Gaussian widths: closed-form bounds for the l1 and Schatten-1
//! descent cones, Monte Carlo estimators, and the Gaussian sample
//! complexity that follows from them.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::reg::Anchored;
use crate::rng::{self, tag};
use crate::stats::mean_and_se;

pub const DEFAULT_TRIALS: usize = 2000;
/// Default `C` in `m >= w^2 + C w`.
pub const DEFAULT_MARGIN: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WidthMethod {
    ClosedFormBound,
    /// Sample mean of `inf_tau dist^2(g, tau df(x))`; an upper-bound estimate
    /// for the squared width of the descent cone.
    MonteCarloDescent,
    /// Square of the sample mean of `sup_u <u, g>` over a subspace sphere.
    MonteCarloSubspace,
}

impl WidthMethod {
    pub fn label(&self) -> &'static str {
        match self {
            WidthMethod::ClosedFormBound => "closed-form-bound",
            WidthMethod::MonteCarloDescent => "monte-carlo-descent",
            WidthMethod::MonteCarloSubspace => "monte-carlo-subspace",
        }
    }
}

/// A squared-width quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WidthEstimate {
    pub value: f64,
    pub std_error: f64,
    pub trials: usize,
    pub method: WidthMethod,
}

impl WidthEstimate {
    pub fn closed_form(value: f64) -> Self {
        WidthEstimate { value, std_error: 0.0, trials: 0, method: WidthMethod::ClosedFormBound }
    }
}

/// `2 s ln(d/s) + 2 s`, a bound on the squared width of the l1 descent cone
/// at an `s`-sparse point of `R^d`.
pub fn sparse_width_bound(s: usize, d: usize) -> Result<f64> {
    if s == 0 || s > d {
        return Err(Error::InvalidArgument(format!("sparsity must satisfy 1 <= s <= d, got s={s}, d={d}")));
    }
    let (s, d) = (s as f64, d as f64);
    Ok(2.0 * s * (d / s).ln() + 2.0 * s)
}

/// `3 r (d1 + d2 - r)`, a bound on the squared width of the Schatten-1
/// descent cone at a rank-`r` matrix of size `d1 x d2`.
pub fn rank_width_bound(r: usize, d1: usize, d2: usize) -> Result<f64> {
    if r == 0 || r > d1.min(d2) {
        return Err(Error::InvalidArgument(format!("rank must satisfy 1 <= r <= min(d1, d2), got r={r}")));
    }
    Ok(3.0 * r as f64 * (d1 + d2 - r) as f64)
}

/// Monte Carlo estimate of `E inf_{tau >= 0} dist^2(g, tau df(x))` over
/// standard Gaussian `g` in the ambient space of `f`.
///
/// This upper-bounds the squared width of the descent cone; it is never an
/// estimate of the width itself. Trial `i` draws from stream `(PROBE, i)`.
pub fn mc_width_sq_descent(f: &Anchored, trials: usize, seed: u64) -> Result<WidthEstimate> {
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let reg = f.regularizer();
    let samples: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::stream(seed, tag::PROBE, i as u64);
            let g = reg.sample_ambient_gaussian(&mut r);
            f.min_dist_sq(&g).map(|m| m.value)
        })
        .collect::<Result<_>>()?;
    let (value, std_error) = mean_and_se(&samples);
    Ok(WidthEstimate { value, std_error, trials, method: WidthMethod::MonteCarloDescent })
}

/// Statistical dimension of a `k`-dimensional subspace.
pub fn subspace_width_sq(k: usize) -> f64 {
    k as f64
}

/// `(E sup_{u in L, |u| = 1} <u, g>)^2` for the subspace `L` spanned by the
/// columns of `basis`, estimated from `trials` Gaussian draws. The standard
/// error is propagated to the square by the delta method.
pub fn mc_width_sq_subspace(basis: &DMatrix<f64>, trials: usize, seed: u64) -> Result<WidthEstimate> {
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let q = linalg::orthonormalize(basis);
    let n = q.nrows();
    let sups: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::stream(seed, tag::PROBE, i as u64);
            q.tr_mul(&rng::gaussian_vec(&mut r, n)).norm()
        })
        .collect();
    let (w, se) = mean_and_se(&sups);
    Ok(WidthEstimate { value: w * w, std_error: 2.0 * w * se, trials, method: WidthMethod::MonteCarloSubspace })
}

/// `sqrt(m - 1) - w - t`; negative values mean no guarantee.
pub fn gordon_lower_bound(m: usize, w: f64, t: f64) -> f64 {
    ((m as f64) - 1.0).max(0.0).sqrt() - w - t
}

/// `ceil(w^2 + C w)`. Values within `1e-9` (relative) of an integer are
/// snapped to it before rounding up.
pub fn sample_complexity_gaussian(w: f64, margin: f64) -> Result<u64> {
    if !(w >= 0.0 && margin >= 0.0) || !w.is_finite() || !margin.is_finite() {
        return Err(Error::InvalidArgument("width and margin must be finite and nonnegative".into()));
    }
    let x = w * w + margin * w;
    let nearest = x.round();
    if (x - nearest).abs() <= 1e-9 * x.max(1.0) {
        Ok(nearest as u64)
    } else {
        Ok(x.ceil() as u64)
    }
}
