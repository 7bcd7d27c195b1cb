//! TOML experiment configuration.
//!
//! ```toml
//! seed = 7
//! trials = 25
//! m_grid = { start = 8, stop = 96, step = 8 }   # or an explicit list
//! eta = 0.0
//!
//! [problem]
//! kind = "sparse-l1"        # or "low-rank-s1" (r, d1, d2), "phase-retrieval" (d)
//! s = 4
//! d = 128
//!
//! [ensemble]                # optional; defaults to gaussian / lifted-gaussian
//! family = "bounded"
//! atom = "rademacher"
//!
//! [solver]                  # optional
//! max_iters = 20000
//! ```
//!
//! Every key and its default is listed on [`ExperimentConfig`]. Unknown keys
//! are rejected.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::measure::{EnsembleSpec, Rademacher, SignalShape, UniformSymmetric};
use crate::reg::Regularizer;
use crate::solve::SolverOptions;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Problem {
    SparseL1 { s: usize, d: usize },
    LowRankS1 { r: usize, d1: usize, d2: usize },
    PhaseRetrieval { d: usize },
}

impl Problem {
    pub fn regularizer(&self) -> Regularizer {
        match *self {
            Problem::SparseL1 { d, .. } => Regularizer::l1(d),
            Problem::LowRankS1 { d1, d2, .. } => Regularizer::schatten1(d1, d2),
            Problem::PhaseRetrieval { d } => Regularizer::trace_psd(d),
        }
    }

    pub fn shape(&self) -> SignalShape {
        self.regularizer().shape()
    }

    pub fn name(&self) -> &'static str {
        match self {
            Problem::SparseL1 { .. } => "sparse-l1",
            Problem::LowRankS1 { .. } => "low-rank-s1",
            Problem::PhaseRetrieval { .. } => "phase-retrieval",
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Problem::SparseL1 { s, d } if s == 0 || s > d => Err(Error::Config(format!("sparse-l1 needs 1 <= s <= d, got s={s}, d={d}"))),
            Problem::LowRankS1 { r, d1, d2 } if r == 0 || r > d1.min(d2) => {
                Err(Error::Config(format!("low-rank-s1 needs 1 <= r <= min(d1, d2), got r={r}")))
            }
            Problem::PhaseRetrieval { d: 0 } => Err(Error::Config("phase-retrieval needs d >= 1".into())),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AtomKind {
    Rademacher,
    /// Uniform on `[-bound, bound]`.
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum EnsembleConfig {
    Gaussian,
    Bounded {
        atom: AtomKind,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bound: Option<f64>,
        /// Declared nondegeneracy constant; estimated from the atom if absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<f64>,
    },
    LiftedGaussian,
}

impl EnsembleConfig {
    pub fn spec(&self, seed: u64) -> Result<EnsembleSpec> {
        match *self {
            EnsembleConfig::Gaussian => Ok(EnsembleSpec::gaussian()),
            EnsembleConfig::LiftedGaussian => Ok(EnsembleSpec::lifted_gaussian()),
            EnsembleConfig::Bounded { atom, bound, alpha } => {
                let atom: crate::measure::Atom = match atom {
                    AtomKind::Rademacher => {
                        if bound.is_some() {
                            return Err(Error::Config("the rademacher atom takes no bound".into()));
                        }
                        Arc::new(Rademacher)
                    }
                    AtomKind::Uniform => Arc::new(UniformSymmetric { bound: bound.unwrap_or(1.0) }),
                };
                EnsembleSpec::bounded(atom, alpha, seed)
            }
        }
    }
}

/// The measurement counts of a sweep: an explicit list or an inclusive range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MGrid {
    List(Vec<usize>),
    Range { start: usize, stop: usize, step: usize },
}

impl MGrid {
    pub fn values(&self) -> Vec<usize> {
        match self {
            MGrid::List(v) => v.clone(),
            MGrid::Range { start, stop, step } if *step > 0 => (*start..=*stop).step_by(*step).collect(),
            MGrid::Range { .. } => Vec::new(),
        }
    }
}

fn default_trials() -> usize {
    25
}
fn default_threshold() -> f64 {
    1e-4
}
fn default_margin() -> f64 {
    crate::width::DEFAULT_MARGIN
}
fn default_mc_trials() -> usize {
    500
}
fn default_gordon_t() -> f64 {
    2.0
}

/// A phase-transition sweep or error curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: Problem,
    /// Defaults to `gaussian`, or `lifted-gaussian` for phase retrieval.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<EnsembleConfig>,
    pub m_grid: MGrid,
    /// Instances per grid point (default 25).
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Noise norm; the noise direction is uniform and the solver receives
    /// exactly this `eta` (default 0).
    #[serde(default)]
    pub eta: f64,
    /// Relative error at or below which a converged solve counts as a
    /// success (default 1e-4).
    #[serde(default = "default_threshold")]
    pub success_threshold: f64,
    #[serde(default)]
    pub seed: u64,
    /// Not part of the config hash.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// `C` in the predicted sample complexity `w^2 + C w` (default 3).
    #[serde(default = "default_margin")]
    pub margin: f64,
    /// Gaussian draws for the Monte Carlo width estimate (default 500).
    #[serde(default = "default_mc_trials")]
    pub mc_width_trials: usize,
    /// Reuse one signal for every instance instead of drawing a fresh one.
    #[serde(default)]
    pub fixed_signal: bool,
    /// Noise levels for error curves.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eta_grid: Vec<f64>,
    /// Deviation `t` in the uncertified Gordon prediction of `lambda_min`
    /// used by error curves when no certificate is available (default 2).
    #[serde(default = "default_gordon_t")]
    pub gordon_t: f64,
    #[serde(default)]
    pub solver: SolverOptions,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.problem.validate()?;
        let grid = self.m_grid.values();
        if grid.is_empty() {
            return Err(Error::Config("m_grid is empty".into()));
        }
        if grid[0] == 0 || grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("m_grid must be positive and strictly increasing".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if !(self.eta >= 0.0) || !self.eta.is_finite() || self.eta_grid.iter().any(|e| !(*e >= 0.0) || !e.is_finite()) {
            return Err(Error::Config("noise levels must be finite and nonnegative".into()));
        }
        if !(self.success_threshold > 0.0) {
            return Err(Error::Config("success_threshold must be positive".into()));
        }
        if !(self.margin >= 0.0) || !(self.gordon_t >= 0.0) {
            return Err(Error::Config("margin and gordon_t must be nonnegative".into()));
        }
        if self.mc_width_trials == 0 {
            return Err(Error::Config("mc_width_trials must be at least 1".into()));
        }
        let lifted = matches!(self.ensemble(), EnsembleConfig::LiftedGaussian);
        let phase = matches!(self.problem, Problem::PhaseRetrieval { .. });
        if lifted != phase {
            return Err(Error::Config("phase-retrieval requires the lifted-gaussian ensemble, and only it".into()));
        }
        if phase && (self.eta > 0.0 || self.eta_grid.iter().any(|e| *e > 0.0)) {
            return Err(Error::Config("phase retrieval is noiseless; eta must be 0".into()));
        }
        self.solver.validate().map_err(|e| Error::Config(e.to_string()))
    }

    pub fn ensemble(&self) -> EnsembleConfig {
        self.ensemble.unwrap_or(match self.problem {
            Problem::PhaseRetrieval { .. } => EnsembleConfig::LiftedGaussian,
            _ => EnsembleConfig::Gaussian,
        })
    }

    /// First 16 hex digits of the SHA-256 of the canonical TOML form,
    /// without the output path.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output = None;
        let digest = Sha256::digest(c.to_toml().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPARSE: &str = r#"
seed = 7
m_grid = { start = 8, stop = 96, step = 8 }

[problem]
kind = "sparse-l1"
s = 4
d = 128
"#;

    #[test]
    fn parses_with_defaults() {
        let c = ExperimentConfig::from_toml_str(SPARSE).unwrap();
        assert_eq!(c.problem, Problem::SparseL1 { s: 4, d: 128 });
        assert_eq!(c.m_grid.values().len(), 12);
        assert_eq!(c.trials, 25);
        assert_eq!(c.success_threshold, 1e-4);
        assert_eq!(c.margin, 3.0);
        assert_eq!(c.ensemble(), EnsembleConfig::Gaussian);
        assert_eq!(c.solver, SolverOptions::default());
    }

    #[test]
    fn round_trips_and_hashes() {
        let c = ExperimentConfig::from_toml_str(SPARSE).unwrap();
        let back = ExperimentConfig::from_toml_str(&c.to_toml()).unwrap();
        assert_eq!(c, back);
        assert_eq!(c.hash(), back.hash());
        assert_eq!(c.hash().len(), 16);
        let mut other = c.clone();
        other.seed = 8;
        assert_ne!(c.hash(), other.hash());
        other = c.clone();
        other.output = Some("x.csv".into());
        assert_eq!(c.hash(), other.hash());
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = [
            "m_grid = [8, 8]\n[problem]\nkind = \"sparse-l1\"\ns = 1\nd = 4\n",
            "m_grid = [8]\ntrials = 0\n[problem]\nkind = \"sparse-l1\"\ns = 1\nd = 4\n",
            "m_grid = [8]\n[problem]\nkind = \"sparse-l1\"\ns = 5\nd = 4\n",
            "m_grid = [8]\n[problem]\nkind = \"phase-retrieval\"\nd = 4\n[ensemble]\nfamily = \"gaussian\"\n",
            "m_grid = [8]\nbogus = 1\n[problem]\nkind = \"sparse-l1\"\ns = 1\nd = 4\n",
            "m_grid = [8]\n[problem]\nkind = \"cubic\"\n",
            "m_grid = [8]\neta = 0.1\n[problem]\nkind = \"phase-retrieval\"\nd = 4\n",
        ];
        for text in bad {
            assert!(matches!(ExperimentConfig::from_toml_str(text), Err(Error::Config(_))), "{text}");
        }
    }

    #[test]
    fn bounded_ensemble_config() {
        let text = "m_grid = [8]\n[problem]\nkind = \"sparse-l1\"\ns = 1\nd = 4\n[ensemble]\nfamily = \"bounded\"\natom = \"uniform\"\nbound = 2.0\n";
        let c = ExperimentConfig::from_toml_str(text).unwrap();
        let spec = c.ensemble().spec(1).unwrap();
        assert_eq!(spec.sigma(), Some(2.0));
        // E|U| = b/2 for U uniform on [-b, b].
        assert!((spec.alpha().unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(ExperimentConfig::load(Path::new("/nonexistent/x.toml")), Err(Error::Io { .. })));
    }
}
