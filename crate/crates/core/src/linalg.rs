//! Dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

const EIGEN_EPS: f64 = 1e-15;
const MAX_SWEEPS: usize = 10_000;

/// Symmetric eigendecomposition of the symmetric part of `a`, eigenvalues
/// sorted in decreasing order (columns of the returned matrix match).
pub fn sym_eigen(a: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let s = symmetrize(a);
    let eig = SymmetricEigen::try_new(s, EIGEN_EPS, MAX_SWEEPS)
        .ok_or_else(|| Error::Numerical("symmetric eigendecomposition did not converge".into()))?;
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let vals = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vecs = DMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vecs.set_column(k, &eig.eigenvectors.column(i));
    }
    Ok((vals, vecs))
}

/// Thin SVD `a = U diag(s) V^T` with singular values in decreasing order.
///
/// Computed with faer: nalgebra's bidiagonal SVD loses accuracy on
/// rank-deficient inputs, which are the common case for low-rank signals.
pub fn svd(a: &DMatrix<f64>) -> Result<(DMatrix<f64>, DVector<f64>, DMatrix<f64>)> {
    let (r, c) = a.shape();
    let k = r.min(c);
    if k == 0 {
        return Ok((DMatrix::zeros(r, 0), DVector::zeros(0), DMatrix::zeros(c, 0)));
    }
    let dec = to_faer(a).thin_svd().map_err(|e| Error::Numerical(format!("SVD did not converge: {e:?}")))?;
    let (u, s, v) = (dec.U(), dec.S().column_vector(), dec.V());
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| s[j].total_cmp(&s[i]));
    let sv = DVector::from_iterator(k, order.iter().map(|&i| s[i]));
    let uo = DMatrix::from_fn(r, k, |row, j| u[(row, order[j])]);
    let vo = DMatrix::from_fn(c, k, |row, j| v[(row, order[j])]);
    Ok((uo, sv, vo))
}

pub fn singular_values(a: &DMatrix<f64>) -> Result<DVector<f64>> {
    if a.nrows().min(a.ncols()) == 0 {
        return Ok(DVector::zeros(0));
    }
    let mut s = to_faer(a)
        .singular_values()
        .map_err(|e| Error::Numerical(format!("SVD did not converge: {e:?}")))?;
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(DVector::from_vec(s))
}

fn to_faer(a: &DMatrix<f64>) -> faer::Mat<f64> {
    faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

/// Smallest singular value of `a` viewed as a map on its column space;
/// zero when `a` has more columns than rows.
pub fn min_singular_value(a: &DMatrix<f64>) -> Result<f64> {
    if a.ncols() == 0 {
        return Ok(f64::INFINITY);
    }
    if a.nrows() < a.ncols() {
        return Ok(0.0);
    }
    let s = singular_values(a)?;
    Ok(s[s.len() - 1].max(0.0))
}

pub fn spectral_norm(a: &DMatrix<f64>) -> Result<f64> {
    let s = singular_values(a)?;
    Ok(if s.is_empty() { 0.0 } else { s[0] })
}

pub fn symmetrize(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a + a.transpose()) * 0.5
}

/// Orthonormal basis for the span of the columns of `a` (modified
/// Gram-Schmidt with one reorthogonalization pass). Columns that are
/// numerically dependent are dropped.
pub fn orthonormalize(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let mut cols: Vec<DVector<f64>> = Vec::new();
    for j in 0..a.ncols() {
        let mut v = a.column(j).into_owned();
        let scale = v.norm();
        if scale == 0.0 {
            continue;
        }
        for _ in 0..2 {
            for q in &cols {
                let c = q.dot(&v);
                v.axpy(-c, q, 1.0);
            }
        }
        let nv = v.norm();
        if nv > 1e-10 * scale {
            cols.push(v / nv);
        }
    }
    if cols.is_empty() {
        return DMatrix::zeros(n, 0);
    }
    DMatrix::from_columns(&cols)
}

/// Extends the orthonormal columns of `q` to an orthonormal basis of R^n.
pub fn complete_basis(q: &DMatrix<f64>) -> DMatrix<f64> {
    let n = q.nrows();
    let mut all = DMatrix::zeros(n, q.ncols() + n);
    all.columns_mut(0, q.ncols()).copy_from(q);
    for i in 0..n {
        all[(i, q.ncols() + i)] = 1.0;
    }
    let basis = orthonormalize(&all);
    debug_assert_eq!(basis.ncols(), n);
    basis
}

pub fn mat_from_vec(v: &DVector<f64>, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_column_slice(rows, cols, v.as_slice())
}

pub fn vec_from_mat(m: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_column_slice(m.as_slice())
}

/// `V diag(w) V^T`.
pub fn reconstruct(vecs: &DMatrix<f64>, w: &DVector<f64>) -> DMatrix<f64> {
    let mut scaled = vecs.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= w[j];
    }
    scaled * vecs.transpose()
}
