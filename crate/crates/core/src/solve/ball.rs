//! Euclidean projection onto `{x : |A x - y| <= eta}`.
//!
//! With a thin SVD `A = U S V^T`, write `y = U y_hat + y_perp`. The set is
//! empty when `|y_perp| > eta`; otherwise only the coordinates `c = V^T x`
//! are constrained, by `|S c - y_hat| <= eta'` with
//! `eta'^2 = eta^2 - |y_perp|^2`. Projecting `z` moves those coordinates to
//! `w_k = (c_k + mu s_k y_hat_k) / (1 + mu s_k^2)` where the multiplier `mu`
//! solves `|r(mu)| = eta'`, `r_k(mu) = (s_k c_k - y_hat_k) / (1 + mu s_k^2)`.
//! That scalar equation is solved by Newton's method on
//! `1 / |r(mu)| - 1 / eta'`, which is concave and increasing in `mu`, so the
//! iterates approach the root monotonically from below.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone)]
pub(crate) struct BallProjector {
    v: DMatrix<f64>,
    s: DVector<f64>,
    y_hat: DVector<f64>,
    y_perp: f64,
    eta: f64,
    eta_range: f64,
}

impl BallProjector {
    pub(crate) fn new(a: &DMatrix<f64>, y: &DVector<f64>, eta: f64) -> Result<Self> {
        if !(eta >= 0.0) || !eta.is_finite() {
            return Err(Error::InvalidArgument(format!("eta must be finite and nonnegative, got {eta}")));
        }
        let (u, s, v) = linalg::svd(a)?;
        let tol = s.get(0).copied().unwrap_or(0.0) * a.nrows().max(a.ncols()) as f64 * f64::EPSILON;
        let r = s.iter().filter(|&&x| x > tol).count();
        let u = u.columns(0, r).into_owned();
        let y_hat = u.tr_mul(y);
        let y_perp = (y - &u * &y_hat).norm();
        let slack = 1e-10 * y.norm().max(1.0);
        if y_perp > eta + slack {
            return Err(Error::Infeasible { residual: y_perp, eta });
        }
        let eta_range = (eta * eta - y_perp * y_perp).max(0.0).sqrt();
        Ok(BallProjector { v: v.columns(0, r).into_owned(), s: s.rows(0, r).into_owned(), y_hat, y_perp, eta, eta_range })
    }

    pub(crate) fn eta(&self) -> f64 {
        self.eta
    }

    /// `|A x - y|` through the factorization.
    pub(crate) fn residual_norm(&self, x: &DVector<f64>) -> f64 {
        let c = self.v.tr_mul(x);
        let r = c.component_mul(&self.s) - &self.y_hat;
        (r.norm_squared() + self.y_perp * self.y_perp).sqrt()
    }

    pub(crate) fn project(&self, z: &DVector<f64>) -> DVector<f64> {
        let c = self.v.tr_mul(z);
        let r0 = c.component_mul(&self.s) - &self.y_hat;
        let n0 = r0.norm();
        if n0 <= self.eta_range {
            return z.clone();
        }
        // Coordinate change c - w in the right singular basis.
        let delta = if self.eta_range == 0.0 {
            r0.component_div(&self.s)
        } else {
            let mu = self.multiplier(&r0, n0);
            DVector::from_fn(r0.len(), |k, _| {
                let sk = self.s[k];
                mu * sk * r0[k] / (1.0 + mu * sk * sk)
            })
        };
        z - &self.v * delta
    }

    fn multiplier(&self, r0: &DVector<f64>, n0: f64) -> f64 {
        let target = self.eta_range;
        let norm_at = |mu: f64| -> (f64, f64) {
            let mut sq = 0.0;
            let mut dsum = 0.0;
            for (rk, sk) in r0.iter().zip(self.s.iter()) {
                let q = 1.0 + mu * sk * sk;
                sq += rk * rk / (q * q);
                dsum += rk * rk * sk * sk / (q * q * q);
            }
            (sq.sqrt(), dsum)
        };
        let s_min = self.s.min();
        let mut lo = 0.0;
        let mut hi = (n0 / target - 1.0) / (s_min * s_min);
        let mut mu = 0.0;
        for _ in 0..200 {
            let (n, dsum) = norm_at(mu);
            if (n - target).abs() <= 4.0 * f64::EPSILON * target {
                return mu;
            }
            if n > target {
                lo = mu;
            } else {
                hi = mu;
            }
            let g = 1.0 / n - 1.0 / target;
            let dg = dsum / (n * n * n);
            let next = mu - g / dg;
            mu = if next.is_finite() && next > lo && next < hi { next } else { 0.5 * (lo + hi) };
            if hi - lo <= 1e-16 * hi.max(1e-300) {
                return mu;
            }
        }
        mu
    }
}
