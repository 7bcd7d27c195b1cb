//! Convex regularizers: values, proximal maps, PSD projection, and
//! distances to scaled subdifferentials (see [`Anchored`]).

mod subdiff;

use nalgebra::{DMatrix, DVector};
use rand::RngCore;

pub use subdiff::{Anchored, DistProfile, TauMin};

use crate::error::{ensure_len, Error, Result};
use crate::linalg::{self, mat_from_vec, vec_from_mat};
use crate::measure::SignalShape;
use crate::rng;

/// Magnitudes at or below this count as zero when reading off supports and ranks.
pub const ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regularizer {
    /// `||x||_1` on `R^d`.
    L1 { dim: usize },
    /// Sum of singular values on `R^{rows x cols}` (column-major).
    Schatten1 { rows: usize, cols: usize },
    /// `trace(X)` on PSD `d x d` matrices, `+inf` elsewhere.
    TracePsd { dim: usize },
}

impl Regularizer {
    pub fn l1(dim: usize) -> Self {
        Regularizer::L1 { dim }
    }

    pub fn schatten1(rows: usize, cols: usize) -> Self {
        Regularizer::Schatten1 { rows, cols }
    }

    pub fn trace_psd(dim: usize) -> Self {
        Regularizer::TracePsd { dim }
    }

    /// Parses `"l1"`, `"s1"` or `"trace-psd"` for a given signal shape.
    pub fn from_name(name: &str, shape: SignalShape) -> Result<Self> {
        match (name, shape) {
            ("l1", SignalShape::Vector(d)) => Ok(Self::l1(d)),
            ("s1", SignalShape::Matrix(r, c)) => Ok(Self::schatten1(r, c)),
            ("trace-psd", SignalShape::Symmetric(d)) => Ok(Self::trace_psd(d)),
            ("l1" | "s1" | "trace-psd", _) => {
                Err(Error::InvalidArgument(format!("regularizer '{name}' does not apply to signal shape {shape:?}")))
            }
            _ => Err(Error::InvalidArgument(format!("unknown regularizer '{name}' (expected l1, s1, trace-psd)"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Regularizer::L1 { .. } => "l1",
            Regularizer::Schatten1 { .. } => "s1",
            Regularizer::TracePsd { .. } => "trace-psd",
        }
    }

    pub fn shape(&self) -> SignalShape {
        match *self {
            Regularizer::L1 { dim } => SignalShape::Vector(dim),
            Regularizer::Schatten1 { rows, cols } => SignalShape::Matrix(rows, cols),
            Regularizer::TracePsd { dim } => SignalShape::Symmetric(dim),
        }
    }

    pub fn signal_len(&self) -> usize {
        self.shape().len()
    }

    /// `f(x)`; `f64::INFINITY` marks points outside the domain.
    pub fn value(&self, x: &DVector<f64>) -> Result<f64> {
        ensure_len(self.signal_len(), x.len())?;
        match *self {
            Regularizer::L1 { .. } => Ok(x.lp_norm(1)),
            Regularizer::Schatten1 { rows, cols } => Ok(linalg::singular_values(&mat_from_vec(x, rows, cols))?.sum()),
            Regularizer::TracePsd { dim } => {
                let xm = mat_from_vec(x, dim, dim);
                let scale = xm.amax().max(1.0);
                if (&xm - xm.transpose()).amax() > 1e-10 * scale {
                    return Ok(f64::INFINITY);
                }
                let (vals, _) = linalg::sym_eigen(&xm)?;
                let floor = -1e-10 * vals.amax().max(1.0);
                if vals.iter().any(|&l| l < floor) {
                    Ok(f64::INFINITY)
                } else {
                    Ok(xm.trace())
                }
            }
        }
    }

    /// `argmin_u f(u) + ||u - z||^2 / (2t)`.
    pub fn prox(&self, z: &DVector<f64>, t: f64) -> Result<DVector<f64>> {
        ensure_len(self.signal_len(), z.len())?;
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::InvalidArgument(format!("prox step must be positive and finite, got {t}")));
        }
        match *self {
            Regularizer::L1 { .. } => Ok(z.map(|v| soft_threshold(v, t))),
            Regularizer::Schatten1 { rows, cols } => {
                let (u, s, v) = linalg::svd(&mat_from_vec(z, rows, cols))?;
                let shrunk = s.map(|x| (x - t).max(0.0));
                let mut us = u;
                for (j, mut col) in us.column_iter_mut().enumerate() {
                    col *= shrunk[j];
                }
                Ok(vec_from_mat(&(us * v.transpose())))
            }
            Regularizer::TracePsd { dim } => {
                let (vals, vecs) = linalg::sym_eigen(&mat_from_vec(z, dim, dim))?;
                let shifted = vals.map(|l| (l - t).max(0.0));
                Ok(vec_from_mat(&linalg::reconstruct(&vecs, &shifted)))
            }
        }
    }

    /// Fixes the reference point at which descent-cone quantities are taken.
    pub fn anchor(&self, reference: &DVector<f64>) -> Result<Anchored> {
        Anchored::new(*self, reference)
    }

    /// A standard Gaussian element of the ambient space (for `TracePsd`, the
    /// space of symmetric matrices with the trace inner product).
    pub fn sample_ambient_gaussian<R: RngCore>(&self, rng: &mut R) -> DVector<f64> {
        match *self {
            Regularizer::L1 { dim } => rng::gaussian_vec(rng, dim),
            Regularizer::Schatten1 { rows, cols } => rng::gaussian_vec(rng, rows * cols),
            Regularizer::TracePsd { dim } => {
                let a = mat_from_vec(&rng::gaussian_vec(rng, dim * dim), dim, dim);
                vec_from_mat(&linalg::symmetrize(&a))
            }
        }
    }
}

pub fn soft_threshold(v: f64, t: f64) -> f64 {
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        0.0
    }
}

/// Nearest PSD matrix in Frobenius norm to the symmetric part of `z`.
pub fn project_psd(z: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if !z.is_square() {
        return Err(Error::Dimension(format!("PSD projection needs a square matrix, got {:?}", z.shape())));
    }
    if z.nrows() == 0 {
        return Ok(z.clone());
    }
    let (vals, vecs) = linalg::sym_eigen(z)?;
    Ok(linalg::reconstruct(&vecs, &vals.map(|l| l.max(0.0))))
}
