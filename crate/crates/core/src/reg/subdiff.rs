//! Exact distances to scaled subdifferentials.
//!
//! For every supported regularizer the squared distance from a point `g`
//! to `tau * df(x)` has the form
//!
//! ```text
//! a - 2 b tau + c tau^2 + fixed + sum_k [v_k - tau]_+^2
//! ```
//!
//! in a coordinate frame adapted to the reference point `x`. A
//! [`DistProfile`] stores those coefficients, so both evaluation and the
//! minimization over `tau >= 0` are closed-form.

use nalgebra::{DMatrix, DVector};

use super::{Regularizer, ZERO_TOL};
use crate::error::{ensure_len, Error, Result};
use crate::linalg::{self, mat_from_vec, vec_from_mat};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauMin {
    pub tau: f64,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct DistProfile {
    a: f64,
    b: f64,
    c: f64,
    fixed: f64,
    excess: Vec<f64>,
}

impl DistProfile {
    pub fn eval(&self, tau: f64) -> f64 {
        let tail: f64 = self.excess.iter().map(|&v| (v - tau).max(0.0).powi(2)).sum();
        (self.a - 2.0 * self.b * tau + self.c * tau * tau + self.fixed + tail).max(0.0)
    }

    /// Global minimizer over `tau >= 0`.
    ///
    /// The derivative is `2 (c tau - b - sum_k [v_k - tau]_+)`, increasing in
    /// `tau`; on the interval where exactly the `k` largest `v` exceed `tau`
    /// the root is `(b + v_1 + ... + v_k) / (c + k)`.
    pub fn minimize(&self) -> TauMin {
        let slope_at_zero = -self.b - self.excess.iter().map(|v| v.max(0.0)).sum::<f64>();
        if slope_at_zero >= 0.0 {
            return TauMin { tau: 0.0, value: self.eval(0.0) };
        }
        let mut v: Vec<f64> = self.excess.iter().copied().filter(|&x| x > 0.0).collect();
        v.sort_by(|x, y| y.total_cmp(x));
        let mut best: Option<TauMin> = None;
        let mut partial = 0.0;
        for k in 0..=v.len() {
            if k > 0 {
                partial += v[k - 1];
            }
            let tau = ((self.b + partial) / (self.c + k as f64)).max(0.0);
            let upper = if k == 0 { f64::INFINITY } else { v[k - 1] };
            let lower = if k < v.len() { v[k] } else { 0.0 };
            let cand = TauMin { tau, value: self.eval(tau) };
            if tau >= lower && tau <= upper {
                return cand;
            }
            if best.is_none_or(|b| cand.value < b.value) {
                best = Some(cand);
            }
        }
        best.expect("at least one candidate")
    }
}

#[derive(Debug, Clone)]
enum Frame {
    /// Sign pattern of the reference, zero off the support.
    L1 { signs: DVector<f64> },
    /// Full orthonormal frames whose leading `rank` columns are the paired
    /// singular vectors of the reference.
    Schatten1 { u: DMatrix<f64>, v: DMatrix<f64>, rank: usize },
    /// Eigenframe with the top eigenvector of the rank-one reference first.
    TracePsd { basis: DMatrix<f64> },
}

/// A regularizer together with the reference point `x` at which its
/// subdifferential, descent cone and widths are evaluated.
///
/// Construction rejects references whose subdifferential contains the
/// origin (`x = 0` for the norms), and for `TracePsd` anything other than a
/// nonzero rank-one PSD matrix.
#[derive(Debug, Clone)]
pub struct Anchored {
    reg: Regularizer,
    reference: DVector<f64>,
    reference_value: f64,
    frame: Frame,
}

impl Anchored {
    pub(super) fn new(reg: Regularizer, reference: &DVector<f64>) -> Result<Self> {
        ensure_len(reg.signal_len(), reference.len())?;
        let frame = match reg {
            Regularizer::L1 { .. } => {
                let signs = reference.map(|x| if x.abs() <= ZERO_TOL { 0.0 } else { x.signum() });
                if signs.iter().all(|&s| s == 0.0) {
                    return Err(Error::InvalidArgument("l1 reference is zero; its subdifferential contains the origin".into()));
                }
                Frame::L1 { signs }
            }
            Regularizer::Schatten1 { rows, cols } => {
                let (u, s, v) = linalg::svd(&mat_from_vec(reference, rows, cols))?;
                let tol = ZERO_TOL * s.get(0).copied().unwrap_or(0.0).max(1.0);
                let rank = s.iter().filter(|&&x| x > tol).count();
                if rank == 0 {
                    return Err(Error::InvalidArgument("s1 reference is zero; its subdifferential contains the origin".into()));
                }
                Frame::Schatten1 {
                    u: linalg::complete_basis(&u.columns(0, rank).into_owned()),
                    v: linalg::complete_basis(&v.columns(0, rank).into_owned()),
                    rank,
                }
            }
            Regularizer::TracePsd { dim } => {
                let xm = mat_from_vec(reference, dim, dim);
                let scale = xm.amax().max(1.0);
                if (&xm - xm.transpose()).amax() > 1e-10 * scale {
                    return Err(Error::InvalidArgument("trace-psd reference must be symmetric".into()));
                }
                let (vals, vecs) = linalg::sym_eigen(&xm)?;
                let tol = 1e-10 * vals.amax().max(1.0);
                if vals[0] <= tol {
                    return Err(Error::InvalidArgument(
                        "trace-psd reference must be nonzero PSD; the subdifferential at 0 contains the origin".into(),
                    ));
                }
                if vals.min() < -tol {
                    return Err(Error::InvalidArgument("trace-psd reference is not PSD".into()));
                }
                if dim > 1 && vals[1] > tol {
                    return Err(Error::Unsupported("trace-psd descent geometry is only available at rank-one references".into()));
                }
                Frame::TracePsd { basis: vecs }
            }
        };
        let reference_value = reg.value(reference)?;
        Ok(Anchored { reg, reference: reference.clone(), reference_value, frame })
    }

    pub fn regularizer(&self) -> Regularizer {
        self.reg
    }

    pub fn reference(&self) -> &DVector<f64> {
        &self.reference
    }

    pub fn reference_value(&self) -> f64 {
        self.reference_value
    }

    /// Norm of the shortest subgradient: `sqrt(s)`, `sqrt(r)`, or 1.
    pub fn min_subgradient_norm(&self) -> f64 {
        match &self.frame {
            Frame::L1 { signs } => signs.iter().filter(|s| **s != 0.0).count() as f64,
            Frame::Schatten1 { rank, .. } => *rank as f64,
            Frame::TracePsd { .. } => 1.0,
        }
        .sqrt()
    }

    /// Support size, rank, or 1 for the rank-one PSD reference.
    pub fn structure_size(&self) -> usize {
        match &self.frame {
            Frame::L1 { signs } => signs.iter().filter(|s| **s != 0.0).count(),
            Frame::Schatten1 { rank, .. } => *rank,
            Frame::TracePsd { .. } => 1,
        }
    }

    pub fn profile(&self, g: &DVector<f64>) -> Result<DistProfile> {
        ensure_len(self.reg.signal_len(), g.len())?;
        Ok(match &self.frame {
            Frame::L1 { signs } => {
                let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
                let mut excess = Vec::new();
                for (gj, sj) in g.iter().zip(signs.iter()) {
                    if *sj != 0.0 {
                        let t = gj * sj;
                        a += t * t;
                        b += t;
                        c += 1.0;
                    } else {
                        excess.push(gj.abs());
                    }
                }
                DistProfile { a, b, c, fixed: 0.0, excess }
            }
            Frame::Schatten1 { u, v, rank } => {
                let (rows, cols) = (u.nrows(), v.nrows());
                let r = *rank;
                let gh = u.transpose() * mat_from_vec(g, rows, cols) * v;
                let g11 = gh.view((0, 0), (r, r));
                let off = gh.view((0, r), (r, cols - r)).norm_squared() + gh.view((r, 0), (rows - r, r)).norm_squared();
                let g22 = gh.view((r, r), (rows - r, cols - r)).into_owned();
                let excess = linalg::singular_values(&g22)?.iter().copied().collect();
                DistProfile { a: g11.norm_squared(), b: g11.trace(), c: r as f64, fixed: off, excess }
            }
            Frame::TracePsd { basis } => {
                let d = basis.nrows();
                let gm = mat_from_vec(g, d, d);
                let skew = (&gm - gm.transpose()) * 0.5;
                let h = basis.transpose() * linalg::symmetrize(&gm) * basis;
                let h11 = h[(0, 0)];
                let h21 = h.view((1, 0), (d - 1, 1)).norm_squared();
                let excess = if d > 1 {
                    linalg::sym_eigen(&h.view((1, 1), (d - 1, d - 1)).into_owned())?.0.iter().copied().collect()
                } else {
                    Vec::new()
                };
                DistProfile { a: h11 * h11, b: h11, c: 1.0, fixed: 2.0 * h21 + skew.norm_squared(), excess }
            }
        })
    }

    /// `dist^2(g, tau * df(x))`.
    pub fn dist_sq(&self, g: &DVector<f64>, tau: f64) -> Result<f64> {
        check_tau(tau)?;
        Ok(self.profile(g)?.eval(tau))
    }

    /// `inf_{tau >= 0} dist^2(g, tau * df(x))` and its minimizer.
    pub fn min_dist_sq(&self, g: &DVector<f64>) -> Result<TauMin> {
        Ok(self.profile(g)?.minimize())
    }

    /// Nearest point to `g` in `tau * df(x)`.
    pub fn nearest(&self, g: &DVector<f64>, tau: f64) -> Result<DVector<f64>> {
        check_tau(tau)?;
        ensure_len(self.reg.signal_len(), g.len())?;
        Ok(match &self.frame {
            Frame::L1 { signs } => DVector::from_fn(g.len(), |j, _| {
                if signs[j] != 0.0 {
                    tau * signs[j]
                } else {
                    g[j].clamp(-tau, tau)
                }
            }),
            Frame::Schatten1 { u, v, rank } => {
                let (rows, cols, r) = (u.nrows(), v.nrows(), *rank);
                let gh = u.transpose() * mat_from_vec(g, rows, cols) * v;
                let mut out = DMatrix::zeros(rows, cols);
                for i in 0..r {
                    out[(i, i)] = tau;
                }
                if rows > r && cols > r {
                    let (u2, s2, v2) = linalg::svd(&gh.view((r, r), (rows - r, cols - r)).into_owned())?;
                    let mut us = u2;
                    for (j, mut col) in us.column_iter_mut().enumerate() {
                        col *= s2[j].min(tau);
                    }
                    out.view_mut((r, r), (rows - r, cols - r)).copy_from(&(us * v2.transpose()));
                }
                vec_from_mat(&(u * out * v.transpose()))
            }
            Frame::TracePsd { basis } => {
                let d = basis.nrows();
                let h = basis.transpose() * linalg::symmetrize(&mat_from_vec(g, d, d)) * basis;
                let mut out = DMatrix::zeros(d, d);
                out[(0, 0)] = tau;
                if d > 1 {
                    let (vals, vecs) = linalg::sym_eigen(&h.view((1, 1), (d - 1, d - 1)).into_owned())?;
                    let capped = vals.map(|l| l.min(tau));
                    out.view_mut((1, 1), (d - 1, d - 1)).copy_from(&linalg::reconstruct(&vecs, &capped));
                }
                vec_from_mat(&(basis * out * basis.transpose()))
            }
        })
    }

    /// Euclidean projection onto the closed descent cone, using
    /// `u = P_D(u) + P_{cone df}(u)`.
    pub fn project_descent_cone(&self, u: &DVector<f64>) -> Result<DVector<f64>> {
        let best = self.min_dist_sq(u)?;
        Ok(u - self.nearest(u, best.tau)?)
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if tau >= 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("scale tau must be finite and nonnegative, got {tau}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{self, tag};
    use approx::assert_relative_eq;

    fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(x)
    }

    #[test]
    fn l1_examples() {
        let f = Regularizer::l1(2).anchor(&v(&[1.0, 0.0])).unwrap();
        assert_relative_eq!(f.dist_sq(&v(&[0.5, 2.0]), 1.0).unwrap(), 1.25);
        assert_eq!(f.dist_sq(&v(&[2.0, 0.0]), 2.0).unwrap(), 0.0);

        let m = f.min_dist_sq(&v(&[1.0, 0.0])).unwrap();
        assert_relative_eq!(m.tau, 1.0);
        assert_eq!(m.value, 0.0);
        let m = f.min_dist_sq(&v(&[0.0, 0.0])).unwrap();
        assert_eq!((m.tau, m.value), (0.0, 0.0));
        assert!(f.dist_sq(&v(&[0.0, 0.0]), -1.0).is_err());
    }

    #[test]
    fn sign_pattern_on_support_has_zero_distance() {
        let x = v(&[2.0, 0.0, -0.5, 0.0]);
        let f = Regularizer::l1(4).anchor(&x).unwrap();
        let tau = 0.7;
        let g = v(&[tau, 0.0, -tau, 0.0]);
        assert_eq!(f.dist_sq(&g, tau).unwrap(), 0.0);
    }

    #[test]
    fn zero_references_rejected() {
        assert!(Regularizer::l1(3).anchor(&DVector::zeros(3)).is_err());
        assert!(Regularizer::schatten1(2, 2).anchor(&DVector::zeros(4)).is_err());
        assert!(Regularizer::trace_psd(2).anchor(&DVector::zeros(4)).is_err());
        assert!(Regularizer::l1(3).anchor(&v(&[1e-13, 0.0, 0.0])).is_err());
    }

    #[test]
    fn trace_psd_rejects_higher_rank_and_indefinite() {
        let eye = vec_from_mat(&DMatrix::<f64>::identity(2, 2));
        assert!(matches!(Regularizer::trace_psd(2).anchor(&eye), Err(Error::Unsupported(_))));
        let indef = v(&[1.0, 0.0, 0.0, -1.0]);
        assert!(Regularizer::trace_psd(2).anchor(&indef).is_err());
    }

    /// Nearest point of `{diag(tau, y) : |y| <= tau}` by dense grid search.
    fn grid_dist_diag(g: &DMatrix<f64>, tau: f64) -> f64 {
        let mut best = f64::INFINITY;
        let n = 200_000;
        for i in 0..=n {
            let y = -tau + 2.0 * tau * i as f64 / n as f64;
            let d = (g[(0, 0)] - tau).powi(2) + g[(0, 1)].powi(2) + g[(1, 0)].powi(2) + (g[(1, 1)] - y).powi(2);
            best = best.min(d);
        }
        best
    }

    #[test]
    fn schatten_diag_example_matches_grid() {
        let sigma = 3.0;
        let x = vec_from_mat(&DMatrix::from_diagonal(&v(&[sigma, 0.0])));
        let f = Regularizer::schatten1(2, 2).anchor(&x).unwrap();
        let tau = 1.0;
        let g = DMatrix::from_diagonal(&v(&[tau, 2.0 * tau]));
        let exact = f.dist_sq(&vec_from_mat(&g), tau).unwrap();
        let oracle = grid_dist_diag(&g, tau);
        assert_relative_eq!(oracle, 1.0, epsilon = 1e-9);
        assert_relative_eq!(exact, oracle, epsilon = 1e-9);
    }

    #[test]
    fn nearest_point_realizes_distance() {
        let mut r = rng::stream(5, tag::PROBE, 0);
        let l1_ref = v(&[1.0, 0.0, -2.0, 0.0, 0.0]);
        let s1_ref = vec_from_mat(&(rng::gaussian_vec(&mut r, 3) * rng::gaussian_vec(&mut r, 4).transpose()));
        let p = rng::gaussian_vec(&mut r, 3);
        let psd_ref = vec_from_mat(&(&p * p.transpose()));
        for (reg, x) in [
            (Regularizer::l1(5), l1_ref),
            (Regularizer::schatten1(3, 4), s1_ref),
            (Regularizer::trace_psd(3), psd_ref),
        ] {
            let f = reg.anchor(&x).unwrap();
            for _ in 0..20 {
                let g = reg.sample_ambient_gaussian(&mut r);
                let tau = 2.0 * rand::Rng::random::<f64>(&mut r);
                let near = f.nearest(&g, tau).unwrap();
                assert_relative_eq!((&g - &near).norm_squared(), f.dist_sq(&g, tau).unwrap(), epsilon = 1e-9, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn minimizer_beats_tau_grid() {
        let mut r = rng::stream(6, tag::PROBE, 0);
        let x = v(&[1.0, 0.0, 0.0, 3.0, 0.0, 0.0, 0.0, 0.0]);
        let f = Regularizer::l1(8).anchor(&x).unwrap();
        for _ in 0..50 {
            let g = rng::gaussian_vec(&mut r, 8) * 2.0;
            let best = f.min_dist_sq(&g).unwrap();
            for i in 0..=10_000 {
                let tau = i as f64 * 1e-3;
                assert!(best.value <= f.dist_sq(&g, tau).unwrap() + 1e-12);
            }
        }
    }

    #[test]
    fn descent_projection_is_idempotent_and_polar() {
        let mut r = rng::stream(7, tag::PROBE, 0);
        let x = v(&[1.0, -1.0, 0.0, 0.0, 0.0, 0.0]);
        let f = Regularizer::l1(6).anchor(&x).unwrap();
        for _ in 0..20 {
            let u = rng::gaussian_vec(&mut r, 6);
            let p = f.project_descent_cone(&u).unwrap();
            let pp = f.project_descent_cone(&p).unwrap();
            assert_relative_eq!(p, pp, epsilon = 1e-10);
            // Residual lies in the polar cone: orthogonal to the projection.
            assert!((&u - &p).dot(&p).abs() < 1e-10);
            // Projection does not increase f to first order.
            let eps = 1e-7;
            assert!(Regularizer::l1(6).value(&(&x + &p * eps)).unwrap() <= f.reference_value() + 1e-12);
        }
    }
}
