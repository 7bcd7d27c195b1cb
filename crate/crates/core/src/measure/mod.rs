//! Random measurement ensembles exposed as linear operators.
//!
//! A [`MeasurementOperator`] maps a flat signal vector to `R^m`. Vector
//! signals are stored as-is, `d1 x d2` matrices column-major, and the
//! symmetric `d x d` matrices of the lifted phase-retrieval model as full
//! column-major `d * d` vectors under the trace inner product.

mod ensemble;
pub mod io;

use nalgebra::{DMatrix, DVector};

pub use ensemble::{
    estimate_mean_abs, Atom, AtomDistribution, DiscreteAtom, EnsembleSpec, Family, Rademacher,
    UniformSymmetric, ATOM_MC_SAMPLES,
};

use crate::error::{ensure_len, Error, Result};
use crate::linalg::mat_from_vec;
use crate::rng::{self, tag};

/// How a flat signal vector is interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalShape {
    Vector(usize),
    /// `rows x cols`, column-major.
    Matrix(usize, usize),
    /// Symmetric `d x d`, stored in full column-major form.
    Symmetric(usize),
}

impl SignalShape {
    pub fn len(&self) -> usize {
        match *self {
            SignalShape::Vector(d) => d,
            SignalShape::Matrix(r, c) => r * c,
            SignalShape::Symmetric(d) => d * d,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone)]
pub enum OperatorKind {
    /// `m x n` matrix acting on flat signals.
    Dense(DMatrix<f64>),
    /// Rows are the vectors `psi_i`; the measurement of `X` is `psi_i^T X psi_i`.
    LiftedRankOne(DMatrix<f64>),
}

/// Immutable once built; safe to share across threads.
#[derive(Debug, Clone)]
pub struct MeasurementOperator {
    kind: OperatorKind,
    shape: SignalShape,
    seed: u64,
    ensemble: EnsembleSpec,
}

fn check_dims(m: usize, d: usize) -> Result<()> {
    if m == 0 || d == 0 {
        return Err(Error::Dimension(format!("need m >= 1 and d >= 1, got m={m}, d={d}")));
    }
    Ok(())
}

/// `m x d` matrix with i.i.d. standard normal entries, filled row by row
/// from the operator stream of `seed`.
pub fn gaussian_ensemble(m: usize, d: usize, seed: u64) -> Result<MeasurementOperator> {
    MeasurementOperator::sample(EnsembleSpec::gaussian(), m, d, seed)
}

/// `m x d` matrix of i.i.d. copies of a symmetric bounded atom.
pub fn bounded_symmetric_ensemble(m: usize, d: usize, atom: Atom, seed: u64) -> Result<MeasurementOperator> {
    let spec = EnsembleSpec::bounded(atom, None, seed)?;
    MeasurementOperator::sample(spec, m, d, seed)
}

/// `m` standard Gaussian vectors in `R^d`, acting on symmetric `d x d`
/// matrices through `X -> (psi_i^T X psi_i)_i`.
pub fn lifted_phase_ensemble(m: usize, d: usize, seed: u64) -> Result<MeasurementOperator> {
    MeasurementOperator::sample(EnsembleSpec::lifted_gaussian(), m, d, seed)
}

impl MeasurementOperator {
    /// Draws `m` rows from `spec` for signals of dimension `d` (the side
    /// length for lifted ensembles).
    pub fn sample(spec: EnsembleSpec, m: usize, d: usize, seed: u64) -> Result<Self> {
        check_dims(m, d)?;
        let mut r = rng::stream(seed, tag::OPERATOR, 0);
        let mut rows = DMatrix::zeros(m, d);
        for i in 0..m {
            let row = spec.sample_row(d, &mut r)?;
            rows.set_row(i, &row.transpose());
        }
        let (kind, shape) = if spec.is_lifted() {
            (OperatorKind::LiftedRankOne(rows), SignalShape::Symmetric(d))
        } else {
            (OperatorKind::Dense(rows), SignalShape::Vector(d))
        };
        Ok(MeasurementOperator { kind, shape, seed, ensemble: spec })
    }

    /// Wraps an explicit matrix acting on vectors.
    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        check_dims(matrix.nrows(), matrix.ncols())?;
        let shape = SignalShape::Vector(matrix.ncols());
        Ok(MeasurementOperator { kind: OperatorKind::Dense(matrix), shape, seed: 0, ensemble: EnsembleSpec::explicit() })
    }

    /// Wraps explicit lifting vectors (one `psi_i` per row).
    pub fn from_lifting_vectors(psi: DMatrix<f64>) -> Result<Self> {
        check_dims(psi.nrows(), psi.ncols())?;
        let shape = SignalShape::Symmetric(psi.ncols());
        Ok(MeasurementOperator {
            kind: OperatorKind::LiftedRankOne(psi),
            shape,
            seed: 0,
            ensemble: EnsembleSpec::explicit(),
        })
    }

    pub(crate) fn from_parts(kind: OperatorKind, shape: SignalShape, seed: u64, ensemble: EnsembleSpec) -> Self {
        MeasurementOperator { kind, shape, seed, ensemble }
    }

    /// Reinterprets a dense operator's input as a `rows x cols` matrix.
    pub fn with_matrix_shape(mut self, rows: usize, cols: usize) -> Result<Self> {
        match self.kind {
            OperatorKind::Dense(ref a) if a.ncols() == rows * cols => {
                self.shape = SignalShape::Matrix(rows, cols);
                Ok(self)
            }
            OperatorKind::Dense(ref a) => Err(Error::Mismatch { expected: a.ncols(), got: rows * cols }),
            OperatorKind::LiftedRankOne(_) => Err(Error::Unsupported("lifted operators act on symmetric matrices".into())),
        }
    }

    pub fn m(&self) -> usize {
        match &self.kind {
            OperatorKind::Dense(a) | OperatorKind::LiftedRankOne(a) => a.nrows(),
        }
    }

    pub fn shape(&self) -> SignalShape {
        self.shape
    }

    /// Length of a flat signal.
    pub fn signal_len(&self) -> usize {
        self.shape.len()
    }

    pub fn kind(&self) -> &OperatorKind {
        &self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn ensemble(&self) -> &EnsembleSpec {
        &self.ensemble
    }

    /// The stored rows: the matrix for dense operators, the `psi_i` for lifted ones.
    pub fn rows(&self) -> &DMatrix<f64> {
        match &self.kind {
            OperatorKind::Dense(a) | OperatorKind::LiftedRankOne(a) => a,
        }
    }

    pub fn is_lifted(&self) -> bool {
        matches!(self.kind, OperatorKind::LiftedRankOne(_))
    }

    pub fn apply(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        ensure_len(self.signal_len(), x.len())?;
        Ok(match &self.kind {
            OperatorKind::Dense(a) => a * x,
            OperatorKind::LiftedRankOne(psi) => {
                let d = psi.ncols();
                let xm = mat_from_vec(x, d, d);
                let px = psi * xm;
                DVector::from_fn(psi.nrows(), |i, _| px.row(i).dot(&psi.row(i)))
            }
        })
    }

    /// Adjoint under the Euclidean (trace) inner product. Lifted adjoints are
    /// `sum_i v_i psi_i psi_i^T`, symmetric by construction.
    pub fn adjoint(&self, v: &DVector<f64>) -> Result<DVector<f64>> {
        ensure_len(self.m(), v.len())?;
        Ok(match &self.kind {
            OperatorKind::Dense(a) => a.tr_mul(v),
            OperatorKind::LiftedRankOne(psi) => {
                let mut scaled = psi.clone();
                for (i, mut row) in scaled.row_iter_mut().enumerate() {
                    row *= v[i];
                }
                let out = psi.tr_mul(&scaled);
                DVector::from_column_slice(out.as_slice())
            }
        })
    }

    /// Measurement `i` as a flat vector in signal space.
    pub fn functional(&self, i: usize) -> DVector<f64> {
        match &self.kind {
            OperatorKind::Dense(a) => a.row(i).transpose(),
            OperatorKind::LiftedRankOne(psi) => {
                let p = psi.row(i).transpose();
                DVector::from_column_slice((&p * p.transpose()).as_slice())
            }
        }
    }

    /// Matrix acting on flattened signals: the dense rows, or one
    /// `vec(psi_i psi_i^T)` per row for lifted operators.
    pub fn flat_matrix(&self) -> DMatrix<f64> {
        match &self.kind {
            OperatorKind::Dense(a) => a.clone(),
            OperatorKind::LiftedRankOne(_) => {
                let mut a = DMatrix::zeros(self.m(), self.signal_len());
                for i in 0..self.m() {
                    a.set_row(i, &self.functional(i).transpose());
                }
                a
            }
        }
    }

    /// Gram matrix `A A^*` (`m x m`).
    pub fn gram(&self) -> DMatrix<f64> {
        match &self.kind {
            OperatorKind::Dense(a) => a * a.transpose(),
            OperatorKind::LiftedRankOne(psi) => (psi * psi.transpose()).map(|c| c * c),
        }
    }

    /// Matrix of `A` restricted to the column span of `basis` (`m x k`).
    pub fn restricted(&self, basis: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        ensure_len(self.signal_len(), basis.nrows())?;
        if let OperatorKind::Dense(a) = &self.kind {
            return Ok(a * basis);
        }
        let mut out = DMatrix::zeros(self.m(), basis.ncols());
        for j in 0..basis.ncols() {
            out.set_column(j, &self.apply(&basis.column(j).into_owned())?);
        }
        Ok(out)
    }
}

/// Additive noise model for [`measure_with_noise`].
#[derive(Debug, Clone)]
pub enum Noise {
    None,
    /// A given error vector, optionally checked against a declared bound `eta`.
    Vector { e: DVector<f64>, eta: Option<f64> },
    /// A uniformly random direction scaled to norm exactly `eta`.
    Sphere { eta: f64, seed: u64 },
}

/// `y = A x + e`.
pub fn measure_with_noise(op: &MeasurementOperator, x: &DVector<f64>, noise: &Noise) -> Result<DVector<f64>> {
    let clean = op.apply(x)?;
    let e = noise_vector(op.m(), noise)?;
    Ok(clean + e)
}

/// The error vector a noise model contributes for `m` measurements.
pub fn noise_vector(m: usize, noise: &Noise) -> Result<DVector<f64>> {
    match noise {
        Noise::None => Ok(DVector::zeros(m)),
        Noise::Vector { e, eta } => {
            ensure_len(m, e.len())?;
            if let Some(eta) = eta {
                let n = e.norm();
                if n > *eta {
                    return Err(Error::InvalidArgument(format!("noise norm {n:.6e} exceeds declared bound {eta:.6e}")));
                }
            }
            Ok(e.clone())
        }
        Noise::Sphere { eta, seed } => {
            if !(*eta >= 0.0) || !eta.is_finite() {
                return Err(Error::InvalidArgument("noise level must be finite and nonnegative".into()));
            }
            if *eta == 0.0 {
                return Ok(DVector::zeros(m));
            }
            let mut r = rng::stream(*seed, tag::NOISE, 0);
            let g = rng::gaussian_vec(&mut r, m);
            let n = g.norm();
            Ok(g * (*eta / n))
        }
    }
}
