//! Minimum conic singular values and the deterministic recovery error bound.
//!
//! `lambda_min(A; K) = inf { |A u| : u in K, |u| = 1 }`. Full spaces and
//! subspaces are handled exactly through a smallest singular value. Cones
//! given by generators in two or three dimensions are handled by a dense
//! net on `K cap S^{d-1}`, which yields a certified lower bound. Descent
//! cones in higher dimension only admit a heuristic: projected gradient from
//! random starts, whose best value is an upper bound.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{ensure_len, Error, Result};
use crate::linalg;
use crate::measure::{MeasurementOperator, SignalShape};
use crate::reg::Anchored;
use crate::rng::{self, tag, StreamRng};

pub const NET_RESOLUTION_2D: f64 = 1e-3;
pub const NET_RESOLUTION_3D: f64 = 2e-2;
pub const HEURISTIC_RESTARTS: usize = 32;
pub const HEURISTIC_ITERS: usize = 500;
/// Largest barycentric subdivision attempted for one generator triangle.
const MAX_SUBDIVISION: usize = 4096;

/// A closed convex cone in signal space.
#[derive(Debug, Clone)]
pub enum ConeDescriptor {
    FullSpace { dim: usize },
    /// Column span of an orthonormal basis.
    Subspace { basis: DMatrix<f64> },
    Descent(Anchored),
    /// Conic hull of unit generators in `R^2` or `R^3`.
    Explicit { generators: Vec<DVector<f64>> },
}

impl ConeDescriptor {
    pub fn full_space(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension("cone dimension must be positive".into()));
        }
        Ok(ConeDescriptor::FullSpace { dim })
    }

    /// Span of the columns of `spanning`, orthonormalized. Rank-deficient
    /// inputs are rejected.
    pub fn subspace(spanning: &DMatrix<f64>) -> Result<Self> {
        let k = spanning.ncols();
        if k == 0 || spanning.nrows() == 0 {
            return Err(Error::Dimension("subspace needs at least one spanning vector".into()));
        }
        let s = linalg::singular_values(spanning)?;
        if s[k.min(spanning.nrows()) - 1] <= 1e-10 * s[0].max(1e-300) || k > spanning.nrows() {
            return Err(Error::InvalidArgument("subspace spanning vectors are linearly dependent".into()));
        }
        Ok(ConeDescriptor::Subspace { basis: linalg::orthonormalize(spanning) })
    }

    pub fn descent(f: Anchored) -> Self {
        ConeDescriptor::Descent(f)
    }

    pub fn explicit(generators: Vec<DVector<f64>>) -> Result<Self> {
        let d = generators.first().map(|g| g.len()).ok_or_else(|| Error::InvalidArgument("no generators".into()))?;
        if !(2..=3).contains(&d) {
            return Err(Error::Unsupported(format!("explicit cones are supported in dimension 2 or 3, got {d}")));
        }
        let mut unit = Vec::with_capacity(generators.len());
        for g in &generators {
            ensure_len(d, g.len())?;
            let n = g.norm();
            if !(n > 0.0) || !n.is_finite() {
                return Err(Error::InvalidArgument("cone generators must be nonzero and finite".into()));
            }
            unit.push(g / n);
        }
        Ok(ConeDescriptor::Explicit { generators: unit })
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        match self {
            ConeDescriptor::FullSpace { dim } => *dim,
            ConeDescriptor::Subspace { basis } => basis.nrows(),
            ConeDescriptor::Descent(f) => f.regularizer().signal_len(),
            ConeDescriptor::Explicit { generators } => generators[0].len(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ConeDescriptor::FullSpace { .. } => "full-space",
            ConeDescriptor::Subspace { .. } => "subspace",
            ConeDescriptor::Descent(_) => "descent",
            ConeDescriptor::Explicit { .. } => "explicit",
        }
    }

    /// Euclidean projection onto the cone. Explicit cones use an exact
    /// active-set enumeration, which is fine for the handful of generators
    /// these low-dimensional cones carry.
    pub fn project(&self, u: &DVector<f64>) -> Result<DVector<f64>> {
        ensure_len(self.dim(), u.len())?;
        match self {
            ConeDescriptor::FullSpace { .. } => Ok(u.clone()),
            ConeDescriptor::Subspace { basis } => Ok(basis * basis.tr_mul(u)),
            ConeDescriptor::Descent(f) => f.project_descent_cone(u),
            ConeDescriptor::Explicit { generators } => Ok(project_generated(generators, u)),
        }
    }

    /// `sup { <u, h> : u in K, |u| = 1 }`.
    ///
    /// Exact for spaces. For descent cones this is `dist(h, K polar) =
    /// |P_K h|`, which equals the supremum when the supremum is nonnegative
    /// and bounds it from above otherwise. Explicit cones return the net
    /// maximum, within `|h|` times the covering radius below the supremum.
    pub fn support_on_sphere(&self, h: &DVector<f64>) -> Result<f64> {
        ensure_len(self.dim(), h.len())?;
        match self {
            ConeDescriptor::FullSpace { .. } => Ok(h.norm()),
            ConeDescriptor::Subspace { basis } => Ok(basis.tr_mul(h).norm()),
            ConeDescriptor::Descent(f) => Ok(f.min_dist_sq(h)?.value.sqrt()),
            ConeDescriptor::Explicit { .. } => {
                let net = self.net(None)?;
                Ok(net.points.iter().map(|p| p.dot(h)).fold(f64::NEG_INFINITY, f64::max))
            }
        }
    }

    /// A random unit vector of the cone: Gaussian directions for spaces,
    /// normalized projections of Gaussians for descent cones, and random
    /// conic combinations of generators for explicit cones. May return the
    /// zero vector when a descent cone projection vanishes repeatedly.
    pub fn sample_unit(&self, r: &mut StreamRng) -> DVector<f64> {
        let d = self.dim();
        match self {
            ConeDescriptor::FullSpace { .. } => normalized(rng::gaussian_vec(r, d)),
            ConeDescriptor::Subspace { basis } => normalized(basis * rng::gaussian_vec(r, basis.ncols())),
            ConeDescriptor::Descent(f) => {
                let reg = f.regularizer();
                for _ in 0..100 {
                    let g = reg.sample_ambient_gaussian(r);
                    if let Ok(p) = f.project_descent_cone(&g) {
                        if p.norm() > 1e-12 * g.norm() {
                            return normalized(p);
                        }
                    }
                }
                DVector::zeros(d)
            }
            ConeDescriptor::Explicit { generators } => {
                let mut u = DVector::zeros(d);
                for g in generators {
                    let w: f64 = -rand::Rng::random::<f64>(r).max(1e-300).ln();
                    u += g * w;
                }
                if u.norm() <= 1e-12 {
                    generators[0].clone()
                } else {
                    normalized(u)
                }
            }
        }
    }

    /// A finite set of unit vectors of the cone with a covering radius:
    /// every unit vector of the cone lies within `radius` of some point.
    pub fn net(&self, resolution: Option<f64>) -> Result<Net> {
        match self {
            ConeDescriptor::FullSpace { dim: 2 } => Ok(arc_net(0.0, 2.0 * PI, resolution.unwrap_or(NET_RESOLUTION_2D))),
            ConeDescriptor::FullSpace { dim: 3 } => {
                let mut gens = Vec::new();
                for i in 0..3 {
                    gens.push(DVector::from_fn(3, |j, _| if i == j { 1.0 } else { 0.0 }));
                    gens.push(DVector::from_fn(3, |j, _| if i == j { -1.0 } else { 0.0 }));
                }
                let mut tris = Vec::new();
                for sx in [0, 1] {
                    for sy in [2, 3] {
                        for sz in [4, 5] {
                            tris.push([sx, sy, sz]);
                        }
                    }
                }
                triangle_net(&gens, &tris, resolution.unwrap_or(NET_RESOLUTION_3D))
            }
            ConeDescriptor::Explicit { generators } if generators[0].len() == 2 => {
                let res = resolution.unwrap_or(NET_RESOLUTION_2D);
                match planar_arc(generators) {
                    Some((start, len)) => Ok(arc_net(start, len, res)),
                    None => Ok(arc_net(0.0, 2.0 * PI, res)),
                }
            }
            ConeDescriptor::Explicit { generators } => {
                let n = generators.len();
                let mut tris = Vec::new();
                if n < 3 {
                    // Degenerate triangles still cover the 1- and 2-generator hulls.
                    tris.push([0, n - 1, n - 1]);
                } else {
                    for i in 0..n {
                        for j in i + 1..n {
                            for k in j + 1..n {
                                tris.push([i, j, k]);
                            }
                        }
                    }
                }
                triangle_net(generators, &tris, resolution.unwrap_or(NET_RESOLUTION_3D))
            }
            _ => Err(Error::Unsupported(format!(
                "net evaluation needs a full space or explicit cone in dimension <= 3, got {} in dimension {}",
                self.kind_name(),
                self.dim()
            ))),
        }
    }
}

fn normalized(v: DVector<f64>) -> DVector<f64> {
    let n = v.norm();
    if n > 0.0 {
        v / n
    } else {
        v
    }
}

/// Finite subset of `K cap S^{d-1}` with its covering radius.
#[derive(Debug, Clone)]
pub struct Net {
    pub points: Vec<DVector<f64>>,
    pub radius: f64,
}

fn arc_net(start: f64, len: f64, res: f64) -> Net {
    let steps = ((len / res).ceil() as usize).max(1);
    let h = len / steps as f64;
    let full = len >= 2.0 * PI - 1e-15;
    let count = if full { steps } else { steps + 1 };
    let points = (0..count)
        .map(|i| {
            let a = start + h * i as f64;
            DVector::from_vec(vec![a.cos(), a.sin()])
        })
        .collect();
    let radius = if len == 0.0 { 0.0 } else { 2.0 * (h / 4.0).sin() };
    Net { points, radius }
}

/// The conic hull of planar unit generators as an arc `(start angle,
/// length)`, or `None` when the hull is the whole plane.
fn planar_arc(generators: &[DVector<f64>]) -> Option<(f64, f64)> {
    let mut angles: Vec<f64> = generators.iter().map(|g| g[1].atan2(g[0]).rem_euclid(2.0 * PI)).collect();
    angles.sort_by(f64::total_cmp);
    let n = angles.len();
    let (mut best_gap, mut best_end) = (2.0 * PI - angles[n - 1] + angles[0], 0);
    for i in 1..n {
        let gap = angles[i] - angles[i - 1];
        if gap > best_gap {
            best_gap = gap;
            best_end = i;
        }
    }
    if best_gap < PI - 1e-12 {
        return None;
    }
    let start = angles[best_end];
    Some((start, 2.0 * PI - best_gap))
}

/// Barycentric refinement of spherical triangles spanned by generator
/// triples. The image of a subtriangle on the sphere has diameter at most
/// its longest edge chord, so every covered unit vector lies within that
/// chord of a vertex.
fn triangle_net(gens: &[DVector<f64>], tris: &[[usize; 3]], res: f64) -> Result<Net> {
    let mut points = Vec::new();
    let mut radius: f64 = 0.0;
    for t in tris {
        let (a, b, c) = (&gens[t[0]], &gens[t[1]], &gens[t[2]]);
        let vertex = |n: usize, i: usize, j: usize| -> DVector<f64> { (a * (n - i - j) as f64 + b * i as f64 + c * j as f64) / n as f64 };
        let mut n = 1usize;
        loop {
            let (chord, min_norm) = max_chord(&vertex, n);
            if min_norm < 1e-9 {
                return Err(Error::Unsupported("generator triangle passes through the origin; the cone is not pointed".into()));
            }
            if chord <= res {
                radius = radius.max(chord);
                break;
            }
            n *= 2;
            if n > MAX_SUBDIVISION {
                return Err(Error::Numerical("net refinement limit reached".into()));
            }
        }
        for i in 0..=n {
            for j in 0..=n - i {
                points.push(vertex(n, i, j).normalize());
            }
        }
    }
    Ok(Net { points, radius })
}

fn max_chord(vertex: &dyn Fn(usize, usize, usize) -> DVector<f64>, n: usize) -> (f64, f64) {
    let unit = |i, j| {
        let v: DVector<f64> = vertex(n, i, j);
        let nv = v.norm();
        (v / nv, nv)
    };
    let mut chord: f64 = 0.0;
    let mut min_norm = f64::INFINITY;
    for i in 0..=n {
        for j in 0..=n - i {
            let (p, np) = unit(i, j);
            min_norm = min_norm.min(np);
            if i + j < n {
                chord = chord.max((&p - unit(i + 1, j).0).norm());
                chord = chord.max((&p - unit(i, j + 1).0).norm());
                chord = chord.max((unit(i + 1, j).0 - unit(i, j + 1).0).norm());
            }
        }
    }
    (chord, min_norm)
}

/// Projection onto the conic hull of a few generators by enumerating the
/// active sets of the nonnegative least-squares problem.
fn project_generated(gens: &[DVector<f64>], u: &DVector<f64>) -> DVector<f64> {
    let n = gens.len();
    let mut best = DVector::zeros(u.len());
    let mut best_dist = u.norm_squared();
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        if idx.len() > u.len() {
            continue;
        }
        let g = DMatrix::from_fn(u.len(), idx.len(), |r, c| gens[idx[c]][r]);
        let gram = g.tr_mul(&g);
        let Some(coef) = gram.clone().cholesky().map(|ch| ch.solve(&g.tr_mul(u))) else { continue };
        if coef.iter().any(|&c| c < 0.0) {
            continue;
        }
        let p = &g * coef;
        let dist = (u - &p).norm_squared();
        if dist < best_dist {
            best_dist = dist;
            best = p;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaMode {
    Exact,
    Net,
    /// Best value found by projected gradient: an upper bound.
    Heuristic,
}

impl LambdaMode {
    pub fn label(&self) -> &'static str {
        match self {
            LambdaMode::Exact => "exact",
            LambdaMode::Net => "net",
            LambdaMode::Heuristic => "heuristic",
        }
    }
}

#[derive(Debug, Clone)]
pub struct LambdaOptions {
    /// Force a mode; `None` picks exact, then net, then heuristic.
    pub mode: Option<LambdaMode>,
    pub resolution: Option<f64>,
    pub restarts: usize,
    pub iters: usize,
    pub seed: u64,
}

impl Default for LambdaOptions {
    fn default() -> Self {
        LambdaOptions { mode: None, resolution: None, restarts: HEURISTIC_RESTARTS, iters: HEURISTIC_ITERS, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaMin {
    /// Exact value, smallest net value, or best heuristic value.
    pub value: f64,
    /// A certified lower bound when one is available.
    pub lower: Option<f64>,
    pub mode: LambdaMode,
    /// Net covering radius, when a net was used.
    pub resolution: Option<f64>,
}

impl LambdaMin {
    pub fn certified(&self) -> bool {
        self.lower.is_some()
    }

    pub fn status(&self) -> &'static str {
        match self.mode {
            LambdaMode::Exact => "certified-exact",
            LambdaMode::Net => "certified-lower-bound",
            LambdaMode::Heuristic => "upper-bound (heuristic)",
        }
    }
}

/// Matrix of the operator on an orthonormal basis of its signal space
/// (for symmetric signals, the trace-orthonormal basis of `Sym(d)`).
pub fn operator_matrix(op: &MeasurementOperator) -> Result<DMatrix<f64>> {
    match op.shape() {
        SignalShape::Symmetric(d) => op.restricted(&symmetric_basis(d)),
        _ => Ok(op.rows().clone()),
    }
}

/// Orthonormal basis of the symmetric `d x d` matrices, flattened column-major.
pub fn symmetric_basis(d: usize) -> DMatrix<f64> {
    let mut basis = DMatrix::zeros(d * d, d * (d + 1) / 2);
    let mut k = 0;
    for j in 0..d {
        for i in j..d {
            if i == j {
                basis[(i + j * d, k)] = 1.0;
            } else {
                let w = std::f64::consts::FRAC_1_SQRT_2;
                basis[(i + j * d, k)] = w;
                basis[(j + i * d, k)] = w;
            }
            k += 1;
        }
    }
    basis
}

pub fn lambda_min_empirical(op: &MeasurementOperator, cone: &ConeDescriptor, opts: &LambdaOptions) -> Result<LambdaMin> {
    ensure_len(op.signal_len(), cone.dim())?;
    let auto = match cone {
        ConeDescriptor::FullSpace { .. } | ConeDescriptor::Subspace { .. } => LambdaMode::Exact,
        ConeDescriptor::Explicit { .. } => LambdaMode::Net,
        ConeDescriptor::Descent(_) => LambdaMode::Heuristic,
    };
    match opts.mode.unwrap_or(auto) {
        LambdaMode::Exact => {
            let value = match cone {
                ConeDescriptor::FullSpace { .. } => linalg::min_singular_value(&operator_matrix(op)?)?,
                ConeDescriptor::Subspace { basis } => linalg::min_singular_value(&op.restricted(basis)?)?,
                _ => return Err(Error::Unsupported(format!("no exact evaluation for {} cones", cone.kind_name()))),
            };
            Ok(LambdaMin { value, lower: Some(value), mode: LambdaMode::Exact, resolution: None })
        }
        LambdaMode::Net => {
            if cone.dim() > 3 {
                return Err(Error::Unsupported(format!("net mode is limited to dimension 3, got {}", cone.dim())));
            }
            let net = cone.net(opts.resolution)?;
            let a = op.rows();
            let value = net.points.iter().map(|p| (a * p).norm()).fold(f64::INFINITY, f64::min);
            let lower = (value - linalg::spectral_norm(a)? * net.radius).max(0.0);
            Ok(LambdaMin { value, lower: Some(lower), mode: LambdaMode::Net, resolution: Some(net.radius) })
        }
        LambdaMode::Heuristic => heuristic(op, cone, opts),
    }
}

/// Projected gradient on `|A u|^2` over `K cap S`, restart-parallel.
fn heuristic(op: &MeasurementOperator, cone: &ConeDescriptor, opts: &LambdaOptions) -> Result<LambdaMin> {
    if opts.restarts == 0 || opts.iters == 0 {
        return Err(Error::InvalidArgument("heuristic mode needs at least one restart and one iteration".into()));
    }
    let a = op.flat_matrix();
    let norm = linalg::spectral_norm(&a)?;
    if norm == 0.0 {
        return Ok(LambdaMin { value: 0.0, lower: Some(0.0), mode: LambdaMode::Heuristic, resolution: None });
    }
    let step = 1.0 / (norm * norm);
    let results: Vec<f64> = (0..opts.restarts)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let mut r = rng::stream(opts.seed, tag::RESTART, i as u64);
            let mut u = cone.sample_unit(&mut r);
            if u.norm() == 0.0 {
                return Ok(f64::INFINITY);
            }
            let mut best = (&a * &u).norm();
            for _ in 0..opts.iters {
                let grad = a.tr_mul(&(&a * &u));
                let p = cone.project(&(&u - grad * step))?;
                let n = p.norm();
                if n <= 1e-14 {
                    break;
                }
                u = p / n;
                best = best.min((&a * &u).norm());
            }
            Ok(best)
        })
        .collect::<Result<_>>()?;
    let value = results.into_iter().fold(f64::INFINITY, f64::min);
    if !value.is_finite() {
        return Err(Error::Numerical("no restart produced a nonzero cone direction".into()));
    }
    Ok(LambdaMin { value, lower: None, mode: LambdaMode::Heuristic, resolution: None })
}

/// `2 eta / lambda`, or `+inf` when `lambda <= 0`.
pub fn deterministic_error_bound(eta: f64, lambda: f64) -> Result<f64> {
    if !(eta >= 0.0) {
        return Err(Error::InvalidArgument(format!("noise level must be nonnegative, got {eta}")));
    }
    if lambda > 0.0 {
        Ok(2.0 * eta / lambda)
    } else {
        Ok(f64::INFINITY)
    }
}

/// Whether `f(x + tau u) <= f(x) + slack` for some `tau = 2^k`,
/// `k = -40..=10`. Conservative near the boundary of cones that are not
/// closed.
///
/// The slack is `1e-12 tau |u|` plus a few ulps of `f(x)`. A fixed absolute
/// slack would accept any direction at `tau = 2^-40`, where even a unit-rate
/// increase is below `1e-12`.
pub fn descent_cone_membership(f: &Anchored, u: &DVector<f64>) -> Result<bool> {
    ensure_len(f.regularizer().signal_len(), u.len())?;
    if u.iter().all(|&v| v == 0.0) {
        return Err(Error::InvalidArgument("direction must be nonzero".into()));
    }
    let reg = f.regularizer();
    let base = f.reference_value();
    let rounding = 64.0 * f64::EPSILON * base.abs().max(1.0);
    let un = u.norm();
    for k in -40..=10 {
        let tau = 2f64.powi(k);
        if reg.value(&(f.reference() + u * tau))? <= base + 1e-12 * tau * un + rounding {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::gaussian_ensemble;
    use crate::reg::Regularizer;
    use approx::assert_relative_eq;

    fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(x)
    }

    #[test]
    fn exact_examples() {
        let eye = MeasurementOperator::from_matrix(DMatrix::identity(3, 3)).unwrap();
        let l = lambda_min_empirical(&eye, &ConeDescriptor::full_space(3).unwrap(), &LambdaOptions::default()).unwrap();
        assert_relative_eq!(l.value, 1.0, epsilon = 1e-14);
        assert_eq!(l.mode, LambdaMode::Exact);

        let diag = MeasurementOperator::from_matrix(DMatrix::from_diagonal(&v(&[3.0, 2.0]))).unwrap();
        let k = ConeDescriptor::subspace(&DMatrix::from_column_slice(2, 1, &[0.0, 1.0])).unwrap();
        assert_relative_eq!(lambda_min_empirical(&diag, &k, &LambdaOptions::default()).unwrap().value, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn net_half_line() {
        let op = MeasurementOperator::from_matrix(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])).unwrap();
        let k = ConeDescriptor::explicit(vec![v(&[1.0, 0.0])]).unwrap();
        let l = lambda_min_empirical(&op, &k, &LambdaOptions::default()).unwrap();
        // Oracle: the only unit direction is (1, 0) and |A (1,0)| = 1.
        let oracle = (op.rows() * v(&[1.0, 0.0])).norm();
        assert_relative_eq!(l.value, oracle, epsilon = 1e-15);
        assert_eq!(l.lower, Some(1.0));
    }

    #[test]
    fn planar_arcs() {
        let g = |a: f64| v(&[a.cos(), a.sin()]);
        let (s, len) = planar_arc(&[g(0.1), g(1.0), g(0.5)]).unwrap();
        assert_relative_eq!(s, 0.1, epsilon = 1e-12);
        assert_relative_eq!(len, 0.9, epsilon = 1e-12);
        let (s, len) = planar_arc(&[g(-0.3), g(0.4)]).unwrap();
        assert_relative_eq!(s, 2.0 * PI - 0.3, epsilon = 1e-12);
        assert_relative_eq!(len, 0.7, epsilon = 1e-12);
        assert!(planar_arc(&[g(0.0), g(2.0), g(4.0)]).is_none());
    }

    #[test]
    fn net_halving_resolution_is_lipschitz_consistent() {
        let op = gaussian_ensemble(5, 2, 3).unwrap();
        let k = ConeDescriptor::explicit(vec![v(&[1.0, 0.2]), v(&[-0.3, 1.0])]).unwrap();
        let norm = linalg::spectral_norm(op.rows()).unwrap();
        let coarse = LambdaOptions { resolution: Some(2e-3), ..Default::default() };
        let fine = LambdaOptions { resolution: Some(1e-3), ..Default::default() };
        let a = lambda_min_empirical(&op, &k, &coarse).unwrap();
        let b = lambda_min_empirical(&op, &k, &fine).unwrap();
        assert!((a.value - b.value).abs() <= norm * 2e-3);
        assert!(b.lower.unwrap() <= b.value);
    }

    #[test]
    fn net_3d_covers_cone() {
        let gens = vec![v(&[1.0, 0.0, 0.2]), v(&[0.0, 1.0, 0.2]), v(&[-0.5, -0.5, 1.0]), v(&[0.3, 0.3, 1.0])];
        let k = ConeDescriptor::explicit(gens).unwrap();
        let net = k.net(None).unwrap();
        assert!(net.radius <= NET_RESOLUTION_3D);
        let mut r = rng::stream(1, tag::DIRECTION, 0);
        for _ in 0..200 {
            let u = k.sample_unit(&mut r);
            let nearest = net.points.iter().map(|p| (p - &u).norm()).fold(f64::INFINITY, f64::min);
            assert!(nearest <= net.radius + 1e-12);
        }
    }

    #[test]
    fn net_refused_above_three() {
        let op = gaussian_ensemble(5, 4, 3).unwrap();
        let opts = LambdaOptions { mode: Some(LambdaMode::Net), ..Default::default() };
        assert!(lambda_min_empirical(&op, &ConeDescriptor::full_space(4).unwrap(), &opts).is_err());
    }

    #[test]
    fn full_space_net_agrees_with_exact() {
        let op = gaussian_ensemble(6, 3, 11).unwrap();
        let k = ConeDescriptor::full_space(3).unwrap();
        let exact = lambda_min_empirical(&op, &k, &LambdaOptions::default()).unwrap().value;
        let net = lambda_min_empirical(&op, &k, &LambdaOptions { mode: Some(LambdaMode::Net), ..Default::default() }).unwrap();
        assert!(net.lower.unwrap() <= exact + 1e-12 && exact <= net.value + 1e-12);
    }

    #[test]
    fn heuristic_upper_bounds_subspace_exact() {
        // A descent cone containing a known line: l1 at a dense point is a
        // half-space, so its lambda_min is at most the exact full-space value.
        let op = gaussian_ensemble(12, 6, 5).unwrap();
        let f = Regularizer::l1(6).anchor(&v(&[1.0, -1.0, 2.0, 0.5, -0.5, 1.0])).unwrap();
        let h = lambda_min_empirical(&op, &ConeDescriptor::descent(f), &LambdaOptions::default()).unwrap();
        let full = lambda_min_empirical(&op, &ConeDescriptor::full_space(6).unwrap(), &LambdaOptions::default()).unwrap();
        assert_eq!(h.mode, LambdaMode::Heuristic);
        assert!(!h.certified());
        assert!(h.value >= full.value - 1e-9);
    }

    #[test]
    fn heuristic_deterministic() {
        let op = gaussian_ensemble(8, 10, 5).unwrap();
        let mut x = DVector::zeros(10);
        x[2] = 1.0;
        let k = ConeDescriptor::descent(Regularizer::l1(10).anchor(&x).unwrap());
        let opts = LambdaOptions { seed: 4, ..Default::default() };
        assert_eq!(lambda_min_empirical(&op, &k, &opts).unwrap(), lambda_min_empirical(&op, &k, &opts).unwrap());
    }

    #[test]
    fn symmetric_basis_orthonormal() {
        let b = symmetric_basis(4);
        assert_relative_eq!(b.tr_mul(&b), DMatrix::identity(10, 10), epsilon = 1e-14);
    }

    #[test]
    fn error_bound_examples() {
        assert_relative_eq!(deterministic_error_bound(0.1, 2.0).unwrap(), 0.1);
        assert_eq!(deterministic_error_bound(0.0, 0.5).unwrap(), 0.0);
        assert_eq!(deterministic_error_bound(1.0, 0.0).unwrap(), f64::INFINITY);
        assert!(deterministic_error_bound(-1.0, 1.0).is_err());
    }

    #[test]
    fn membership_examples() {
        let f = Regularizer::l1(2).anchor(&v(&[1.0, 0.0])).unwrap();
        assert!(descent_cone_membership(&f, &v(&[-1.0, 0.0])).unwrap());
        assert!(!descent_cone_membership(&f, &v(&[0.0, 1.0])).unwrap());
        // Scalar oracle: |1 - tau| + 0.99 tau < 1 for 0 < tau < 1.
        let tau = 0.5f64;
        assert!((1.0 - tau).abs() + 0.99 * tau < 1.0);
        assert!(descent_cone_membership(&f, &v(&[-1.0, 0.99])).unwrap());
        assert!(descent_cone_membership(&f, &v(&[0.0, 0.0])).is_err());
    }

    #[test]
    fn projection_onto_generated_cone() {
        let gens = vec![v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0])];
        let k = ConeDescriptor::explicit(gens).unwrap();
        assert_relative_eq!(k.project(&v(&[2.0, -1.0, 5.0])).unwrap(), v(&[2.0, 0.0, 0.0]));
        assert_relative_eq!(k.project(&v(&[-2.0, -1.0, 5.0])).unwrap(), v(&[0.0, 0.0, 0.0]));
    }
}
