//! Sampling distributions for measurement functionals.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::sync::Arc;

use nalgebra::DVector;
use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::rng::{self, tag};

/// Number of draws used to estimate `E|X|` for atoms without a closed form.
pub const ATOM_MC_SAMPLES: usize = 100_000;

/// A bounded scalar distribution used for i.i.d. matrix entries.
///
/// Implement this to plug in atoms beyond the built-in ones. Ensembles
/// refuse atoms that do not report themselves symmetric about zero.
pub trait AtomDistribution: Send + Sync + fmt::Debug {
    fn name(&self) -> String;
    /// Almost-sure bound on `|X|`.
    fn bound(&self) -> f64;
    fn is_symmetric(&self) -> bool;
    /// Exact `E|X|` when known in closed form.
    fn mean_abs(&self) -> Option<f64> {
        None
    }
    fn sample(&self, rng: &mut dyn RngCore) -> f64;
}

pub type Atom = Arc<dyn AtomDistribution>;

/// Uniform on `{-1, +1}`.
#[derive(Debug, Clone, Copy)]
pub struct Rademacher;

impl AtomDistribution for Rademacher {
    fn name(&self) -> String {
        "rademacher".into()
    }
    fn bound(&self) -> f64 {
        1.0
    }
    fn is_symmetric(&self) -> bool {
        true
    }
    fn mean_abs(&self) -> Option<f64> {
        Some(1.0)
    }
    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        rng::rademacher(rng)
    }
}

/// Uniform on `[-b, b]`.
#[derive(Debug, Clone, Copy)]
pub struct UniformSymmetric {
    pub bound: f64,
}

impl AtomDistribution for UniformSymmetric {
    fn name(&self) -> String {
        format!("uniform({})", self.bound)
    }
    fn bound(&self) -> f64 {
        self.bound
    }
    fn is_symmetric(&self) -> bool {
        true
    }
    fn mean_abs(&self) -> Option<f64> {
        Some(self.bound / 2.0)
    }
    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        rng.random_range(-self.bound..=self.bound)
    }
}

/// Finite-support atom `P{X = values[i]} = probs[i]`.
#[derive(Debug, Clone)]
pub struct DiscreteAtom {
    values: Vec<f64>,
    cumulative: Vec<f64>,
    probs: Vec<f64>,
}

impl DiscreteAtom {
    /// Validates the weights and symmetry about zero.
    pub fn new(values: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.len() != probs.len() {
            return Err(Error::InvalidArgument("atom needs matching, nonempty values and probabilities".into()));
        }
        if probs.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("atom values and probabilities must be finite, probabilities nonnegative".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!("atom probabilities sum to {total}, not 1")));
        }
        let atom = DiscreteAtom {
            cumulative: probs
                .iter()
                .scan(0.0, |acc, &p| {
                    *acc += p;
                    Some(*acc)
                })
                .collect(),
            values,
            probs,
        };
        if !atom.is_symmetric() {
            return Err(Error::InvalidArgument("atom distribution is not symmetric about 0".into()));
        }
        Ok(atom)
    }

    fn mass_at(&self, v: f64) -> f64 {
        self.values
            .iter()
            .zip(&self.probs)
            .filter(|(x, _)| (**x - v).abs() <= 1e-12 * (1.0 + v.abs()))
            .map(|(_, p)| p)
            .sum()
    }
}

impl AtomDistribution for DiscreteAtom {
    fn name(&self) -> String {
        "discrete".into()
    }
    fn bound(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
    fn is_symmetric(&self) -> bool {
        self.values.iter().all(|&v| (self.mass_at(v) - self.mass_at(-v)).abs() <= 1e-12)
    }
    fn mean_abs(&self) -> Option<f64> {
        Some(self.values.iter().zip(&self.probs).map(|(v, p)| v.abs() * p).sum())
    }
    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        let u: f64 = rng.random();
        let i = self.cumulative.partition_point(|&c| c <= u);
        self.values[i.min(self.values.len() - 1)]
    }
}

#[derive(Debug, Clone)]
pub enum Family {
    StandardGaussian,
    BoundedSymmetric(Atom),
    /// Rank-one lifts `psi psi^T` of standard Gaussian vectors.
    LiftedGaussian,
    /// A user-supplied or deserialized matrix with no generating law.
    Explicit,
}

/// The law of one measurement functional together with its subgaussian
/// parameters: nondegeneracy `alpha` (a lower bound on `E|<u, phi>|` over
/// unit `u`) and the subgaussian scale `sigma`.
#[derive(Debug, Clone)]
pub struct EnsembleSpec {
    pub family: Family,
    alpha: Option<f64>,
    sigma: Option<f64>,
    alpha_std_error: Option<f64>,
}

impl EnsembleSpec {
    /// `alpha = E|g| = sqrt(2/pi)`, and `P{|g| >= t} <= 2 exp(-t^2/2)` gives `sigma = 1`.
    pub fn gaussian() -> Self {
        EnsembleSpec {
            family: Family::StandardGaussian,
            alpha: Some((2.0 / PI).sqrt()),
            sigma: Some(1.0),
            alpha_std_error: None,
        }
    }

    pub fn lifted_gaussian() -> Self {
        EnsembleSpec { family: Family::LiftedGaussian, alpha: None, sigma: None, alpha_std_error: None }
    }

    pub fn explicit() -> Self {
        EnsembleSpec { family: Family::Explicit, alpha: None, sigma: None, alpha_std_error: None }
    }

    /// Entries i.i.d. from a symmetric atom bounded by `sigma`. Unless a value
    /// is declared, `alpha = 2^{-1/2} E|X|` with `E|X|` exact when the atom
    /// knows it, otherwise estimated from [`ATOM_MC_SAMPLES`] draws (the
    /// standard error is kept, scaled the same way).
    pub fn bounded(atom: Atom, declared_alpha: Option<f64>, seed: u64) -> Result<Self> {
        if !atom.is_symmetric() {
            return Err(Error::InvalidArgument(format!("atom {} is not symmetric", atom.name())));
        }
        let sigma = atom.bound();
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidArgument("atom bound must be positive and finite".into()));
        }
        let (alpha, se) = match declared_alpha {
            Some(a) => (a, None),
            None => match atom.mean_abs() {
                Some(m) => (FRAC_1_SQRT_2 * m, None),
                None => {
                    let (m, se) = estimate_mean_abs(atom.as_ref(), ATOM_MC_SAMPLES, seed);
                    (FRAC_1_SQRT_2 * m, Some(FRAC_1_SQRT_2 * se))
                }
            },
        };
        if !(alpha > 0.0) {
            return Err(Error::InvalidArgument("nondegeneracy constant must be positive".into()));
        }
        Ok(EnsembleSpec {
            family: Family::BoundedSymmetric(atom),
            alpha: Some(alpha),
            sigma: Some(sigma),
            alpha_std_error: se,
        })
    }

    /// Overrides the declared parameters.
    pub fn with_params(mut self, alpha: f64, sigma: f64) -> Result<Self> {
        if !(alpha > 0.0 && sigma > 0.0) {
            return Err(Error::InvalidArgument("alpha and sigma must be positive".into()));
        }
        self.alpha = Some(alpha);
        self.sigma = Some(sigma);
        self.alpha_std_error = None;
        Ok(self)
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    pub fn sigma(&self) -> Option<f64> {
        self.sigma
    }

    pub fn alpha_std_error(&self) -> Option<f64> {
        self.alpha_std_error
    }

    /// Eccentricity `sigma / alpha`.
    pub fn rho(&self) -> Option<f64> {
        Some(self.sigma? / self.alpha?)
    }

    pub fn name(&self) -> String {
        match &self.family {
            Family::StandardGaussian => "gaussian".into(),
            Family::BoundedSymmetric(a) => format!("bounded:{}", a.name()),
            Family::LiftedGaussian => "lifted-gaussian".into(),
            Family::Explicit => "explicit".into(),
        }
    }

    pub fn is_lifted(&self) -> bool {
        matches!(self.family, Family::LiftedGaussian)
    }

    /// Length of one functional acting on signals built from dimension `d`:
    /// `d` for vector ensembles, `d * d` for lifted ones.
    pub fn functional_len(&self, d: usize) -> usize {
        if self.is_lifted() {
            d * d
        } else {
            d
        }
    }

    /// One draw of the underlying vector: `phi` itself, or `psi` for lifted
    /// ensembles.
    pub fn sample_row<R: RngCore>(&self, d: usize, rng: &mut R) -> Result<DVector<f64>> {
        match &self.family {
            Family::StandardGaussian | Family::LiftedGaussian => Ok(rng::gaussian_vec(rng, d)),
            Family::BoundedSymmetric(atom) => Ok(DVector::from_fn(d, |_, _| atom.sample(rng))),
            Family::Explicit => Err(Error::Unsupported("explicit ensembles cannot be sampled".into())),
        }
    }

    /// One measurement functional as a flat vector in signal space: `phi`,
    /// or `vec(psi psi^T)` for lifted ensembles.
    pub fn sample_functional<R: RngCore>(&self, d: usize, rng: &mut R) -> Result<DVector<f64>> {
        let row = self.sample_row(d, rng)?;
        if self.is_lifted() {
            Ok(DVector::from_column_slice((&row * row.transpose()).as_slice()))
        } else {
            Ok(row)
        }
    }
}

/// Monte Carlo `E|X|` with its standard error.
pub fn estimate_mean_abs(atom: &dyn AtomDistribution, n: usize, seed: u64) -> (f64, f64) {
    let mut r = rng::stream(seed, tag::ATOM, 0);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n {
        let a = atom.sample(&mut r).abs();
        sum += a;
        sum_sq += a * a;
    }
    let nf = n as f64;
    let mean = sum / nf;
    let var = ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0);
    (mean, (var / nf).sqrt())
}
