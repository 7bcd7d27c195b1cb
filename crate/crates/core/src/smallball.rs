//! Small-ball lower bounds for `inf_{u in E} (sum_i <u, phi_i>^2)^{1/2}`.
//!
//! The two Monte Carlo ingredients are the marginal tail function
//! `Q_xi(E) = inf_{u in E} P{|<u, phi>| >= xi}` and the mean empirical width
//! `W_m(E) = E sup_{u in E} <u, h>` with `h = m^{-1/2} sum_i eps_i phi_i`.
//! They combine into `xi sqrt(m) Q_{2 xi} - 2 W_m - xi t`, which holds with
//! probability at least `1 - exp(-t^2 / 2)`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;
use statrs::function::{erf::erfc, gamma::ln_gamma};

use crate::conic::ConeDescriptor;
use crate::error::{Error, Result};
use crate::measure::EnsembleSpec;
use crate::reg::Anchored;
use crate::rng::{self, tag, StreamRng};
use crate::stats::{binomial_se, mean_and_se};

/// Samples per parallel chunk in [`phase_second_moment`].
const MOMENT_CHUNK: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailEstimate {
    pub xi: f64,
    /// Minimum over sampled directions of the empirical tail frequency.
    pub q_hat: f64,
    /// Mean over sampled directions.
    pub q_hat_mean: f64,
    /// Binomial standard error of `q_hat` at its own direction.
    pub std_error: f64,
    pub n_dirs: usize,
    pub n_samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmpiricalWidthEstimate {
    pub m: usize,
    pub w_hat: f64,
    pub std_error: f64,
    pub trials: usize,
    pub seed: u64,
}

/// Constants of the subgaussian lower bound. `c` and `c5` default to `1/54`
/// and `1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubgaussianParams {
    pub alpha: f64,
    pub sigma: f64,
    pub c5: f64,
    pub c: f64,
}

impl SubgaussianParams {
    pub fn new(alpha: f64, sigma: f64) -> Result<Self> {
        let p = SubgaussianParams { alpha, sigma, c5: 1.0, c: 1.0 / 54.0 };
        p.validate()?;
        Ok(p)
    }

    pub fn from_ensemble(spec: &EnsembleSpec) -> Result<Self> {
        match (spec.alpha(), spec.sigma()) {
            (Some(a), Some(s)) => Self::new(a, s),
            _ => Err(Error::InvalidArgument(format!("ensemble {} declares no (alpha, sigma)", spec.name()))),
        }
    }

    pub fn with_constants(mut self, c5: f64, c: f64) -> Result<Self> {
        self.c5 = c5;
        self.c = c;
        self.validate()?;
        Ok(self)
    }

    pub fn rho(&self) -> f64 {
        self.sigma / self.alpha
    }

    fn validate(&self) -> Result<()> {
        let all = [self.alpha, self.sigma, self.c5, self.c];
        if all.iter().all(|v| *v > 0.0 && v.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidArgument("subgaussian parameters must be positive and finite".into()))
        }
    }
}

/// Draws of `phi` for `d`-dimensional signals (`d` is the side length for
/// lifted ensembles), from stream `(FUNCTIONAL, index)`.
fn functional_rng(seed: u64, index: u64) -> StreamRng {
    rng::stream(seed, tag::FUNCTIONAL, index)
}

/// `Q_xi` for each `xi` in `xis`, all evaluated on one shared sample of
/// directions and functionals, so the estimates are exactly nonincreasing
/// in `xi`.
///
/// Direction `j` comes from stream `(DIRECTION, j)` and functional `k` from
/// `(FUNCTIONAL, k)`.
pub fn estimate_marginal_tails(
    ensemble: &EnsembleSpec,
    d: usize,
    sampler: &(dyn Fn(&mut StreamRng) -> DVector<f64> + Sync),
    xis: &[f64],
    n_dirs: usize,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<TailEstimate>> {
    if xis.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
        return Err(Error::InvalidArgument("thresholds must be finite and nonnegative".into()));
    }
    if n_dirs == 0 || n_samples == 0 {
        return Err(Error::InvalidArgument("need at least one direction and one sample".into()));
    }
    let n = ensemble.functional_len(d);
    let dirs: Vec<DVector<f64>> = (0..n_dirs).map(|j| sampler(&mut rng::stream(seed, tag::DIRECTION, j as u64))).collect();
    for u in &dirs {
        if u.len() != n {
            return Err(Error::Mismatch { expected: n, got: u.len() });
        }
        let norm = u.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidArgument("direction sampler produced a zero or non-finite vector".into()));
        }
    }
    let dirs = DMatrix::from_columns(&dirs.iter().map(|u| u / u.norm()).collect::<Vec<_>>());
    // |<u_j, phi_k>| for all pairs, one functional at a time.
    let abs: Vec<Vec<f64>> = (0..n_samples)
        .into_par_iter()
        .map(|k| -> Result<Vec<f64>> {
            let phi = ensemble.sample_functional(d, &mut functional_rng(seed, k as u64))?;
            Ok(dirs.tr_mul(&phi).iter().map(|v| v.abs()).collect())
        })
        .collect::<Result<_>>()?;
    Ok(xis
        .iter()
        .map(|&xi| {
            let freqs: Vec<f64> = (0..n_dirs)
                .map(|j| abs.iter().filter(|row| row[j] >= xi).count() as f64 / n_samples as f64)
                .collect();
            let q_hat = freqs.iter().copied().fold(f64::INFINITY, f64::min);
            let q_hat_mean = freqs.iter().sum::<f64>() / n_dirs as f64;
            TailEstimate { xi, q_hat, q_hat_mean, std_error: binomial_se(q_hat, n_samples), n_dirs, n_samples, seed }
        })
        .collect())
}

pub fn estimate_marginal_tail(
    ensemble: &EnsembleSpec,
    d: usize,
    sampler: &(dyn Fn(&mut StreamRng) -> DVector<f64> + Sync),
    xi: f64,
    n_dirs: usize,
    n_samples: usize,
    seed: u64,
) -> Result<TailEstimate> {
    Ok(estimate_marginal_tails(ensemble, d, sampler, &[xi], n_dirs, n_samples, seed)?[0])
}

/// `h = m^{-1/2} sum_i eps_i phi_i` for trial `trial`; functionals come from
/// stream `(FUNCTIONAL, trial)` and signs from `(RADEMACHER, trial)`.
pub fn empirical_process_vector(ensemble: &EnsembleSpec, d: usize, m: usize, seed: u64, trial: u64) -> Result<DVector<f64>> {
    let mut phi_rng = functional_rng(seed, trial);
    let mut eps_rng = rng::stream(seed, tag::RADEMACHER, trial);
    let mut h = DVector::zeros(ensemble.functional_len(d));
    for _ in 0..m {
        let phi = ensemble.sample_functional(d, &mut phi_rng)?;
        h.axpy(rng::rademacher(&mut eps_rng), &phi, 1.0);
    }
    Ok(h / (m as f64).sqrt())
}

/// Monte Carlo `W_m(K cap S)` with the supremum evaluated by
/// [`ConeDescriptor::support_on_sphere`]: exactly for spaces, through the
/// distance to the polar cone for descent cones, and on a dense net for
/// explicit cones in dimension at most 3.
pub fn estimate_mean_empirical_width(
    ensemble: &EnsembleSpec,
    cone: &ConeDescriptor,
    d: usize,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<EmpiricalWidthEstimate> {
    if m == 0 || trials == 0 {
        return Err(Error::InvalidArgument("need m >= 1 and at least one trial".into()));
    }
    let n = ensemble.functional_len(d);
    if cone.dim() != n {
        return Err(Error::Mismatch { expected: n, got: cone.dim() });
    }
    let sups: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| cone.support_on_sphere(&empirical_process_vector(ensemble, d, m, seed, i as u64)?))
        .collect::<Result<_>>()?;
    let (w_hat, std_error) = mean_and_se(&sups);
    Ok(EmpiricalWidthEstimate { m, w_hat, std_error, trials, seed })
}

/// `E inf_tau dist(h, tau df(x))`, an upper-bound estimate for the mean
/// empirical width of the descent cone of `f` at its reference point.
pub fn bowling_width_descent(f: &Anchored, ensemble: &EnsembleSpec, d: usize, m: usize, trials: usize, seed: u64) -> Result<EmpiricalWidthEstimate> {
    estimate_mean_empirical_width(ensemble, &ConeDescriptor::descent(f.clone()), d, m, trials, seed)
}

/// `xi sqrt(m) q - 2 w - xi t`; nonpositive values carry no information.
pub fn small_ball_lower_bound(xi: f64, m: usize, q: f64, w: f64, t: f64) -> f64 {
    xi * (m as f64).sqrt() * q - 2.0 * w - xi * t
}

/// Confidence level `1 - exp(-t^2 / 2)` of the small-ball bound.
pub fn small_ball_confidence(t: f64) -> f64 {
    1.0 - (-t * t / 2.0).exp()
}

/// `(alpha - 2 xi)^2 / (4 sigma^2)`, capped at 1: the second-moment lower
/// bound on `Q_{2 xi}` for ensembles with nondegeneracy `alpha` and
/// subgaussian scale `sigma`.
pub fn paley_zygmund_tail(alpha: f64, sigma: f64, xi: f64) -> Result<f64> {
    if !(alpha > 0.0 && sigma > 0.0 && xi >= 0.0) {
        return Err(Error::InvalidArgument("need alpha > 0, sigma > 0, xi >= 0".into()));
    }
    if 2.0 * xi >= alpha {
        return Err(Error::InvalidArgument(format!("bound requires 2 xi < alpha, got xi={xi}, alpha={alpha}")));
    }
    Ok(((alpha - 2.0 * xi).powi(2) / (4.0 * sigma * sigma)).min(1.0))
}

/// `c (alpha^3 / sigma^2) sqrt(m) - C5 sigma w - (alpha / 6) t`.
pub fn subgaussian_conic_bound(params: &SubgaussianParams, m: usize, w: f64, t: f64) -> f64 {
    let SubgaussianParams { alpha, sigma, c5, c } = *params;
    c * alpha.powi(3) / (sigma * sigma) * (m as f64).sqrt() - c5 * sigma * w - alpha / 6.0 * t
}

/// `P{|g| >= x}` for a standard normal `g`; this is `Q_x(E)` for any `E`
/// under the standard Gaussian ensemble.
pub fn gaussian_abs_tail(x: f64) -> f64 {
    erfc(x / std::f64::consts::SQRT_2)
}

/// `E |g|` for a standard Gaussian vector in `R^k`, the Gaussian width of
/// a `k`-dimensional subspace.
pub fn gaussian_norm_mean(k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let k = k as f64;
    std::f64::consts::SQRT_2 * (ln_gamma((k + 1.0) / 2.0) - ln_gamma(k / 2.0)).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Monte Carlo `E <U, psi psi^T>^2` over standard Gaussian `psi`, for a
/// symmetric `U` of unit Frobenius norm.
pub fn phase_second_moment(u: &DMatrix<f64>, n_samples: usize, seed: u64) -> Result<MomentEstimate> {
    let d = u.nrows();
    if d == 0 || u.ncols() != d {
        return Err(Error::Dimension("U must be square and nonempty".into()));
    }
    if (u - u.transpose()).amax() > 1e-12 {
        return Err(Error::InvalidArgument("U must be symmetric".into()));
    }
    if (u.norm() - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidArgument(format!("U must have unit Frobenius norm, got {}", u.norm())));
    }
    if n_samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let chunks = n_samples.div_ceil(MOMENT_CHUNK);
    let values: Vec<f64> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut r = rng::stream(seed, tag::PROBE, c as u64);
            let len = MOMENT_CHUNK.min(n_samples - c * MOMENT_CHUNK);
            (0..len)
                .map(|_| {
                    let psi = rng::gaussian_vec(&mut r, d);
                    psi.dot(&(u * &psi)).powi(2)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let (value, std_error) = mean_and_se(&values);
    Ok(MomentEstimate { value, std_error, samples: n_samples })
}

/// `2 |U|_F^2 + (tr U)^2`, the exact value of the second moment above.
pub fn phase_second_moment_exact(u: &DMatrix<f64>) -> f64 {
    2.0 * u.norm_squared() + u.trace().powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Rademacher;
    use crate::reg::Regularizer;
    use crate::width;
    use approx::assert_relative_eq;
    use statrs::distribution::{ContinuousCDF, Normal};
    use std::sync::Arc;

    fn sphere(d: usize) -> impl Fn(&mut StreamRng) -> DVector<f64> + Sync {
        move |r: &mut StreamRng| {
            let g = rng::gaussian_vec(r, d);
            &g / g.norm()
        }
    }

    #[test]
    fn tail_at_zero_is_one() {
        let t = estimate_marginal_tail(&EnsembleSpec::gaussian(), 6, &sphere(6), 0.0, 10, 500, 1).unwrap();
        assert_eq!(t.q_hat, 1.0);
        assert_eq!(t.q_hat_mean, 1.0);
    }

    #[test]
    fn tail_at_quartile_is_half() {
        let n = Normal::new(0.0, 1.0).unwrap();
        let xi = n.inverse_cdf(0.75);
        assert_relative_eq!(xi, 0.6745, epsilon = 1e-4);
        let oracle = 2.0 * (1.0 - n.cdf(xi));
        let t = estimate_marginal_tail(&EnsembleSpec::gaussian(), 8, &sphere(8), xi, 1, 20_000, 2).unwrap();
        assert!((t.q_hat - oracle).abs() <= 4.0 * t.std_error, "{} vs {}", t.q_hat, oracle);
        assert_relative_eq!(gaussian_abs_tail(xi), oracle, epsilon = 1e-12);
    }

    #[test]
    fn tail_far_out_is_tiny() {
        let t = estimate_marginal_tail(&EnsembleSpec::gaussian(), 4, &sphere(4), 10.0, 5, 5000, 3).unwrap();
        let n = Normal::new(0.0, 1.0).unwrap();
        assert!(2.0 * (1.0 - n.cdf(10.0)) < 1e-20);
        assert!(t.q_hat <= 1e-3);
    }

    #[test]
    fn tails_nonincreasing_on_shared_sample() {
        let xis: Vec<f64> = (0..40).map(|i| i as f64 * 0.1).collect();
        let ts = estimate_marginal_tails(&EnsembleSpec::gaussian(), 5, &sphere(5), &xis, 7, 300, 4).unwrap();
        for w in ts.windows(2) {
            assert!(w[1].q_hat <= w[0].q_hat && w[1].q_hat_mean <= w[0].q_hat_mean);
        }
        assert!(ts.iter().all(|t| (0.0..=1.0).contains(&t.q_hat)));
    }

    #[test]
    fn zero_direction_rejected() {
        let zero = |_: &mut StreamRng| DVector::zeros(3);
        assert!(estimate_marginal_tail(&EnsembleSpec::gaussian(), 3, &zero, 0.5, 2, 10, 1).is_err());
    }

    #[test]
    fn full_sphere_width_is_mean_norm() {
        let d = 6;
        let (m, trials, seed) = (9, 200, 5);
        let ens = EnsembleSpec::gaussian();
        let est = estimate_mean_empirical_width(&ens, &ConeDescriptor::full_space(d).unwrap(), d, m, trials, seed).unwrap();
        let norms: Vec<f64> = (0..trials).map(|i| empirical_process_vector(&ens, d, m, seed, i as u64).unwrap().norm()).collect();
        assert_relative_eq!(est.w_hat, mean_and_se(&norms).0, epsilon = 1e-12);
    }

    #[test]
    fn subspace_width_matches_chi_mean() {
        let (d, k) = (10, 4);
        let mut r = rng::stream(9, tag::PROBE, 0);
        let cone = ConeDescriptor::subspace(&DMatrix::from_fn(d, k, |_, _| rng::gaussian(&mut r))).unwrap();
        let est = estimate_mean_empirical_width(&EnsembleSpec::gaussian(), &cone, d, 50, 4000, 6).unwrap();
        // Oracle: E|g_k| lies in [sqrt(k-1), sqrt(k)] and equals the chi mean.
        let chi = gaussian_norm_mean(k);
        assert!(chi >= ((k - 1) as f64).sqrt() && chi <= (k as f64).sqrt());
        assert!((est.w_hat - chi).abs() <= 3.0 * est.std_error);
    }

    #[test]
    fn chi_mean_matches_quadrature() {
        // E|g| in R^k = int_0^inf r * chi_k density; simple Simpson oracle.
        for k in 1..=6usize {
            let kf = k as f64;
            let norm = 2f64.powf(kf / 2.0 - 1.0) * ln_gamma(kf / 2.0).exp();
            let f = |r: f64| r * r.powf(kf - 1.0) * (-r * r / 2.0).exp() / norm;
            let (a, b, n) = (0.0, 12.0, 20_000);
            let h = (b - a) / n as f64;
            let mut s = f(a) + f(b);
            for i in 1..n {
                s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            assert_relative_eq!(gaussian_norm_mean(k), s * h / 3.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn single_measurement_is_sign_symmetric() {
        let ens = EnsembleSpec::gaussian();
        let cone = ConeDescriptor::full_space(3).unwrap();
        let h = empirical_process_vector(&ens, 3, 1, 7, 0).unwrap();
        let phi = ens.sample_functional(3, &mut functional_rng(7, 0)).unwrap();
        assert_relative_eq!(h.norm(), phi.norm(), epsilon = 1e-15);
        assert_relative_eq!(cone.support_on_sphere(&h).unwrap(), phi.norm(), epsilon = 1e-15);
    }

    #[test]
    fn small_ball_examples() {
        assert_relative_eq!(small_ball_lower_bound(0.5, 400, 0.9, 3.0, 1.0), 2.5, epsilon = 1e-12);
        assert!(small_ball_lower_bound(0.5, 400, 0.0, 3.0, 1.0) <= 0.0);
        assert_relative_eq!(small_ball_lower_bound(0.3, 25, 0.4, 0.0, 0.0), 0.3 * 5.0 * 0.4, epsilon = 1e-15);
    }

    #[test]
    fn small_ball_monotone() {
        let mut r = rng::stream(1, tag::PROBE, 0);
        for _ in 0..1000 {
            let u = |r: &mut StreamRng| rand::Rng::random::<f64>(r);
            let (xi, q, w, t) = (u(&mut r) + 0.01, u(&mut r), 5.0 * u(&mut r), 3.0 * u(&mut r));
            let m = 1 + (100.0 * u(&mut r)) as usize;
            let base = small_ball_lower_bound(xi, m, q, w, t);
            assert!(small_ball_lower_bound(xi, m, q + 0.1, w, t) >= base);
            assert!(small_ball_lower_bound(xi, m + 1, q, w, t) >= base);
            assert!(small_ball_lower_bound(xi, m, q, w + 0.1, t) <= base);
            assert!(small_ball_lower_bound(xi, m, q, w, t + 0.1) <= base);
        }
    }

    #[test]
    fn paley_zygmund_examples() {
        assert_relative_eq!(paley_zygmund_tail(1.0, 1.0, 1.0 / 6.0).unwrap(), 1.0 / 9.0, epsilon = 1e-15);
        assert!(paley_zygmund_tail(1.0, 1.0, 0.5 - 1e-9).unwrap() < 1e-15);
        assert_eq!(paley_zygmund_tail(2.0, 1.0, 0.0).unwrap(), 1.0);
        assert!(paley_zygmund_tail(1.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn paley_zygmund_below_estimated_tail() {
        let atom: crate::measure::Atom = Arc::new(Rademacher);
        for ens in [EnsembleSpec::gaussian(), EnsembleSpec::bounded(atom, None, 1).unwrap()] {
            let (alpha, sigma) = (ens.alpha().unwrap(), ens.sigma().unwrap());
            for xi in [alpha / 6.0, alpha / 4.0] {
                let pz = paley_zygmund_tail(alpha, sigma, xi).unwrap();
                let q = estimate_marginal_tail(&ens, 6, &sphere(6), 2.0 * xi, 20, 2000, 8).unwrap();
                assert!(pz <= q.q_hat + 3.0 * q.std_error, "{} {pz} {}", ens.name(), q.q_hat);
            }
        }
    }

    #[test]
    fn subgaussian_examples() {
        let p = SubgaussianParams::new(1.0, 1.0).unwrap();
        assert_relative_eq!(subgaussian_conic_bound(&p, 54 * 54, 0.0, 0.0), 1.0, epsilon = 1e-12);
        assert!(subgaussian_conic_bound(&p, 100, 50.0, 0.0) < 0.0);
        let p = SubgaussianParams::new(1.0, 2.0).unwrap();
        let v = subgaussian_conic_bound(&p, 10_000, 1.0, 0.0);
        assert_relative_eq!(v, 100.0 / 216.0 - 2.0, epsilon = 1e-12);
        assert_relative_eq!(v, -1.537, epsilon = 1e-3);
        assert_eq!(p.rho(), 2.0);
        assert!(SubgaussianParams::new(0.0, 1.0).is_err());
    }

    #[test]
    fn bowling_matches_gaussian_width_at_large_m() {
        let d = 40;
        let mut x = DVector::zeros(d);
        x[0] = 1.0;
        x[7] = -2.0;
        let f = Regularizer::l1(d).anchor(&x).unwrap();
        let b = bowling_width_descent(&f, &EnsembleSpec::gaussian(), d, 64, 3000, 11).unwrap();
        // Gaussian h is exactly standard normal for any m; compare with sqrt
        // of the squared-distance estimator on independent draws.
        let g = (0..3000)
            .map(|i| {
                let mut r = rng::stream(12, tag::PROBE, i);
                f.min_dist_sq(&rng::gaussian_vec(&mut r, d)).unwrap().value.sqrt()
            })
            .collect::<Vec<_>>();
        let (gm, gse) = mean_and_se(&g);
        assert!((b.w_hat - gm).abs() <= 3.0 * (b.std_error.powi(2) + gse.powi(2)).sqrt());
        assert!(b.w_hat.powi(2) <= width::sparse_width_bound(2, d).unwrap());
        let again = bowling_width_descent(&f, &EnsembleSpec::gaussian(), d, 64, 3000, 11).unwrap();
        assert_eq!(b, again);
    }

    #[test]
    fn second_moment_oracles() {
        let mut e11 = DMatrix::zeros(3, 3);
        e11[(0, 0)] = 1.0;
        let est = phase_second_moment(&e11, 100_000, 1).unwrap();
        // E g^4 = 3.
        assert!((est.value - 3.0).abs() <= 4.0 * est.std_error);
        assert_eq!(phase_second_moment_exact(&e11), 3.0);

        let mut off = DMatrix::zeros(3, 3);
        off[(0, 1)] = std::f64::consts::FRAC_1_SQRT_2;
        off[(1, 0)] = std::f64::consts::FRAC_1_SQRT_2;
        let est = phase_second_moment(&off, 100_000, 2).unwrap();
        // <U, psi psi^T> = sqrt(2) g1 g2, so the moment is 2 E g1^2 g2^2 = 2.
        assert!((est.value - 2.0).abs() <= 4.0 * est.std_error);
        assert_relative_eq!(phase_second_moment_exact(&off), 2.0, epsilon = 1e-15);

        assert!(phase_second_moment(&(e11.clone() * 2.0), 10, 1).is_err());
        assert_eq!(phase_second_moment(&e11, 2500, 3).unwrap().samples, 2500);
    }
}
