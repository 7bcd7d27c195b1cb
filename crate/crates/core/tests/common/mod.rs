//! Property checks with independent oracles, shared by the property and
//! acceptance test targets. Each check returns `Err` with a description of
//! the first failing case.

#![allow(dead_code)]

use conic_recovery::conic::ConeDescriptor;
use conic_recovery::linalg::{mat_from_vec, vec_from_mat};
use conic_recovery::measure::{self, MeasurementOperator};
use conic_recovery::reg::{project_psd, Regularizer};
use conic_recovery::rng::{self, tag, StreamRng};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;

pub type Check = Result<(), String>;

pub fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn rng_for(seed: u64, case: u64) -> StreamRng {
    rng::stream(seed, tag::PROBE, case)
}

fn sym_from(v: &DVector<f64>, d: usize) -> DMatrix<f64> {
    let m = mat_from_vec(v, d, d);
    (&m + m.transpose()) * 0.5
}

/// A random regularizer of small size, and a point in its domain.
pub fn random_regularizer(r: &mut StreamRng) -> Regularizer {
    match r.random_range(0..3) {
        0 => Regularizer::l1(r.random_range(1..=8)),
        1 => Regularizer::schatten1(r.random_range(1..=5), r.random_range(1..=5)),
        _ => Regularizer::trace_psd(r.random_range(1..=5)),
    }
}

fn random_point(f: &Regularizer, r: &mut StreamRng) -> DVector<f64> {
    let g = rng::gaussian_vec(r, f.signal_len()) * 2.0;
    match f {
        Regularizer::TracePsd { dim } => vec_from_mat(&sym_from(&g, *dim)),
        _ => g,
    }
}

/// Prox objective `|p - z|^2 / 2 + t f(p)`, infinite off the domain.
fn prox_objective(f: &Regularizer, z: &DVector<f64>, t: f64, p: &DVector<f64>) -> f64 {
    let fv = f.value(p).unwrap_or(f64::INFINITY);
    0.5 * (p - z).norm_squared() + t * fv
}

/// `prox(z)` is no worse than nearby feasible points and random points, and
/// the map is nonexpansive.
pub fn prox_properties(seed: u64, case: u64) -> Check {
    let mut r = rng_for(seed, case);
    let f = random_regularizer(&mut r);
    let t = r.random_range(0.05..2.0);
    let z = random_point(&f, &mut r);
    let p = f.prox(&z, t).map_err(|e| e.to_string())?;
    let base = prox_objective(&f, &z, t, &p);
    ensure(base.is_finite(), || format!("{}: prox left the domain", f.name()))?;
    for k in 0..60 {
        let scale = [1e-4, 1e-2, 1.0][k % 3];
        let mut q = &p + rng::gaussian_vec(&mut r, p.len()) * scale;
        if let Regularizer::TracePsd { dim } = f {
            let (vals, vecs) = eig(&sym_from(&q, dim));
            q = vec_from_mat(&(&vecs * DMatrix::from_diagonal(&vals.map(|l| l.max(0.0))) * vecs.transpose()));
        }
        let other = prox_objective(&f, &z, t, &q);
        ensure(other >= base - 1e-10 * (1.0 + base.abs()), || {
            format!("{} prox not optimal: {other} < {base} at scale {scale}", f.name())
        })?;
    }
    let z2 = random_point(&f, &mut r);
    let p2 = f.prox(&z2, t).map_err(|e| e.to_string())?;
    ensure((&p - &p2).norm() <= (&z - &z2).norm() * (1.0 + 1e-12) + 1e-12, || format!("{} prox expands distances", f.name()))
}

fn eig(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let e = SymmetricEigen::new(m.clone());
    (e.eigenvalues, e.eigenvectors)
}

/// Projecting onto the PSD cone twice changes nothing, and the result is PSD.
pub fn psd_projection_idempotent(seed: u64, case: u64) -> Check {
    let mut r = rng_for(seed, case);
    let d = r.random_range(1..=8);
    let z = DMatrix::from_fn(d, d, |_, _| rng::gaussian(&mut r));
    let z = (&z + z.transpose()) * 0.5;
    let p = project_psd(&z).map_err(|e| e.to_string())?;
    let pp = project_psd(&p).map_err(|e| e.to_string())?;
    let scale = 1.0 + z.norm();
    ensure((&pp - &p).norm() <= 1e-12 * scale, || format!("projection moved by {:e}", (&pp - &p).norm()))?;
    let min_eig = eig(&p).0.min();
    ensure(min_eig >= -1e-12 * scale, || format!("projection has eigenvalue {min_eig}"))
}

/// `<A x, v> = <x, A^* v>` for dense, matrix-shaped and lifted operators.
pub fn adjoint_identity(seed: u64, case: u64) -> Check {
    let mut r = rng_for(seed, case);
    let m = r.random_range(1..=12);
    let op_seed: u64 = r.random();
    let op: MeasurementOperator = match case % 3 {
        0 => measure::gaussian_ensemble(m, r.random_range(1..=10), op_seed),
        1 => measure::gaussian_ensemble(m, 12, op_seed).and_then(|o| o.with_matrix_shape(3, 4)),
        _ => measure::lifted_phase_ensemble(m, r.random_range(1..=5), op_seed),
    }
    .map_err(|e| e.to_string())?;
    let x = rng::gaussian_vec(&mut r, op.signal_len());
    let v = rng::gaussian_vec(&mut r, m);
    let lhs = op.apply(&x).map_err(|e| e.to_string())?.dot(&v);
    let rhs = x.dot(&op.adjoint(&v).map_err(|e| e.to_string())?);
    // Relative to the magnitude of the terms being summed.
    let scale = (op.flat_matrix().abs() * x.abs()).dot(&v.abs()).max(f64::MIN_POSITIVE);
    ensure((lhs - rhs).abs() <= 1e-10 * scale, || format!("adjoint mismatch {lhs} vs {rhs}"))
}

/// Dykstra's alternating projections onto `tau * df(x)`, written as the
/// intersection of an affine set and a norm ball:
/// l1: `{y_i = tau sign(x_i) on the support}` and `{|y|_inf <= tau}`;
/// Schatten-1: `{y = tau U V^T + (I - P_U) y (I - P_V)}` and `{|y|_op <= tau}`;
/// trace-PSD at `x x^T`: `{y sym, y x = tau x}` and `{y sym, lambda_max(y) <= tau}`.
pub fn dykstra_subdiff_projection(f: &Regularizer, reference: &DVector<f64>, g: &DVector<f64>, tau: f64) -> DVector<f64> {
    let (proj_a, proj_b): (Box<dyn Fn(&DVector<f64>) -> DVector<f64>>, Box<dyn Fn(&DVector<f64>) -> DVector<f64>>) = match *f {
        Regularizer::L1 { .. } => {
            let x = reference.clone();
            (
                Box::new(move |y| DVector::from_fn(y.len(), |i, _| if x[i] != 0.0 { tau * x[i].signum() } else { y[i] })),
                Box::new(move |y| y.map(|v| v.clamp(-tau, tau))),
            )
        }
        Regularizer::Schatten1 { rows, cols } => {
            let svd = mat_from_vec(reference, rows, cols).svd(true, true);
            let rank = svd.singular_values.iter().filter(|s| **s > 1e-9).count();
            let u = svd.u.unwrap().columns(0, rank).into_owned();
            let v = svd.v_t.unwrap().transpose().columns(0, rank).into_owned();
            let pu = DMatrix::identity(rows, rows) - &u * u.transpose();
            let pv = DMatrix::identity(cols, cols) - &v * v.transpose();
            let uv = &u * v.transpose() * tau;
            (
                Box::new(move |y| vec_from_mat(&(&uv + &pu * mat_from_vec(y, rows, cols) * &pv))),
                Box::new(move |y| {
                    let s = mat_from_vec(y, rows, cols).svd(true, true);
                    let capped = s.singular_values.map(|x| x.min(tau));
                    vec_from_mat(&(s.u.unwrap() * DMatrix::from_diagonal(&capped) * s.v_t.unwrap()))
                }),
            )
        }
        Regularizer::TracePsd { dim } => {
            let (vals, vecs) = eig(&mat_from_vec(reference, dim, dim));
            let top = vecs.column(vals.imax()).into_owned();
            let p = &top * top.transpose();
            let q = DMatrix::identity(dim, dim) - &p;
            (
                Box::new(move |y| vec_from_mat(&(&p * tau + &q * sym_from(y, dim) * &q))),
                Box::new(move |y| {
                    let (l, w) = eig(&sym_from(y, dim));
                    vec_from_mat(&(&w * DMatrix::from_diagonal(&l.map(|x| x.min(tau))) * w.transpose()))
                }),
            )
        }
    };
    let mut y = g.clone();
    let mut pa = DVector::zeros(g.len());
    let mut pb = DVector::zeros(g.len());
    for _ in 0..20000 {
        let a = proj_a(&(&y + &pa));
        pa = &y + &pa - &a;
        let b = proj_b(&(&a + &pb));
        pb = &a + &pb - &b;
        let moved = (&b - &y).norm();
        y = b;
        if moved < 1e-13 {
            break;
        }
    }
    y
}

/// Exact `dist^2(g, tau df(x))` matches the Dykstra oracle for `d <= 6`.
pub fn subdiff_distance_oracle(seed: u64, case: u64) -> Check {
    let mut r = rng_for(seed, case);
    let (f, x) = match case % 3 {
        0 => {
            let d = r.random_range(1..=6);
            let mut x = rng::gaussian_vec(&mut r, d);
            for i in 0..d {
                if r.random_bool(0.5) && i > 0 {
                    x[i] = 0.0;
                }
            }
            (Regularizer::l1(d), x)
        }
        1 => {
            let (a, b) = (r.random_range(1..=3), r.random_range(1..=2));
            let k = r.random_range(1..=a.min(b));
            let l = DMatrix::from_fn(a, k, |_, _| rng::gaussian(&mut r));
            let rt = DMatrix::from_fn(b, k, |_, _| rng::gaussian(&mut r));
            (Regularizer::schatten1(a, b), vec_from_mat(&(l * rt.transpose())))
        }
        _ => {
            let d = r.random_range(1..=2);
            let v = rng::gaussian_vec(&mut r, d);
            (Regularizer::trace_psd(d), vec_from_mat(&(&v * v.transpose())))
        }
    };
    let anchored = f.anchor(&x).map_err(|e| e.to_string())?;
    let g = match f {
        Regularizer::TracePsd { dim } => vec_from_mat(&sym_from(&rng::gaussian_vec(&mut r, dim * dim), dim)) * 2.0,
        _ => rng::gaussian_vec(&mut r, f.signal_len()) * 2.0,
    };
    for tau in [0.0, 0.3, 1.0, 2.5] {
        let exact = anchored.dist_sq(&g, tau).map_err(|e| e.to_string())?;
        let oracle = (&g - dykstra_subdiff_projection(&f, &x, &g, tau)).norm_squared();
        ensure((exact - oracle).abs() <= 1e-6 * (1.0 + oracle), || format!("{} tau={tau}: exact {exact} vs oracle {oracle}", f.name()))?;
    }
    Ok(())
}

/// Projection onto the conic hull of the columns of `gens` by enumerating
/// every subset of generators, solving least squares on it, and keeping the
/// best nonnegative solution.
pub fn nnls_projection(gens: &DMatrix<f64>, h: &DVector<f64>) -> DVector<f64> {
    let k = gens.ncols();
    let mut best = DVector::zeros(h.len());
    let mut best_err = h.norm_squared();
    for mask in 1u32..(1 << k) {
        let cols: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
        let sub = gens.select_columns(&cols);
        let Some(coef) = (sub.transpose() * &sub).try_inverse().map(|inv| inv * sub.transpose() * h) else {
            continue;
        };
        if coef.iter().any(|c| *c < 0.0) {
            continue;
        }
        let p = &sub * coef;
        let err = (h - &p).norm_squared();
        if err < best_err {
            best_err = err;
            best = p;
        }
    }
    best
}

/// A random pointed cone in dimension 2 or 3 with 2 to 4 generators.
pub fn random_cone(r: &mut StreamRng, dim: usize) -> DMatrix<f64> {
    let axis = rng::gaussian_vec(r, dim).normalize();
    let n = if dim == 2 { 2 } else { r.random_range(2..=4) };
    let cols: Vec<DVector<f64>> = (0..n).map(|_| (&axis + rng::gaussian_vec(r, dim) * 0.6).normalize()).collect();
    DMatrix::from_columns(&cols)
}

/// Weak duality: the supremum of `<h, u>` over a net of `K cap S` never
/// exceeds `dist(h, K polar) = |P_K h|`, computed by brute-force NNLS, and
/// comes within the net's resolution of it.
pub fn weak_duality(seed: u64, case: u64) -> Check {
    let mut r = rng_for(seed, case);
    let dim = 2 + (case % 2) as usize;
    let gens = random_cone(&mut r, dim);
    let cone = match ConeDescriptor::explicit(gens.column_iter().map(|c| c.into_owned()).collect()) {
        Ok(c) => c,
        // Non-pointed draws are rejected by construction; skip them.
        Err(_) => return Ok(()),
    };
    let net = cone.net(None).map_err(|e| e.to_string())?;
    for _ in 0..5 {
        let h = rng::gaussian_vec(&mut r, dim);
        let polar_dist = nnls_projection(&gens, &h).norm();
        let sup = net.points.iter().map(|u| h.dot(u)).fold(f64::NEG_INFINITY, f64::max);
        ensure(sup <= polar_dist + 1e-10, || format!("dim {dim}: net sup {sup} > polar distance {polar_dist}"))?;
        if polar_dist > 0.0 {
            ensure(sup >= polar_dist - h.norm() * net.radius - 1e-10, || format!("dim {dim}: net sup {sup} far below {polar_dist}"))?;
        }
    }
    Ok(())
}
