//! Closed convex cones in `R^n` and operators that preserve them.
//!
//! Vectors are plain slices; operators are `nalgebra` matrices. All vector
//! norms are 1-norms.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm1};
use crate::spectrum;

/// Default membership slack.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum ConeKind {
    /// `x >= 0` coordinatewise.
    Orthant,
    /// `{x : d . x >= 0 for every dual row d}`, also spanned by `generators`.
    Polyhedral {
        generators: Vec<Vec<f64>>,
        duals: Vec<Vec<f64>>,
    },
    /// `x[axis] >= |x without axis|_2`.
    Lorentz { axis: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexCone {
    dim: usize,
    kind: ConeKind,
}

fn numerical_rank(rows: &[Vec<f64>], n: usize) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]);
    let sv = m.singular_values();
    let top = sv.iter().fold(0.0_f64, |a, b| a.max(*b));
    sv.iter().filter(|s| **s > 1e-10 * top.max(1e-300)).count()
}

impl ConvexCone {
    pub fn orthant(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension(n));
        }
        Ok(ConvexCone {
            dim: n,
            kind: ConeKind::Orthant,
        })
    }

    pub fn lorentz(n: usize, axis: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidCone(
                "Lorentz cone needs dimension at least 2".into(),
            ));
        }
        if axis >= n {
            return Err(Error::InvalidCone(format!(
                "axis {axis} out of range for dimension {n}"
            )));
        }
        Ok(ConvexCone {
            dim: n,
            kind: ConeKind::Lorentz { axis },
        })
    }

    /// Validates consistency (generators satisfy the inequalities),
    /// properness (the inequalities have full rank) and the generating
    /// property (the generators span `R^n`).
    pub fn polyhedral(n: usize, generators: Vec<Vec<f64>>, duals: Vec<Vec<f64>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension(n));
        }
        if generators.iter().chain(&duals).any(|v| v.len() != n) {
            return Err(Error::InvalidCone(
                "generator or inequality of wrong length".into(),
            ));
        }
        if generators
            .iter()
            .chain(&duals)
            .flatten()
            .any(|x| !x.is_finite())
        {
            return Err(Error::InvalidCone("non-finite data".into()));
        }
        for (gi, g) in generators.iter().enumerate() {
            for (di, d) in duals.iter().enumerate() {
                if dot(g, d) < -1e-12 {
                    return Err(Error::InvalidCone(format!(
                        "generator {gi} violates inequality {di}"
                    )));
                }
            }
        }
        if numerical_rank(&duals, n) < n {
            return Err(Error::InvalidCone(
                "cone is not proper (inequalities lack full rank)".into(),
            ));
        }
        if numerical_rank(&generators, n) < n {
            return Err(Error::InvalidCone(
                "cone is not generating (generators lack full rank)".into(),
            ));
        }
        Ok(ConvexCone {
            dim: n,
            kind: ConeKind::Polyhedral { generators, duals },
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &ConeKind {
        &self.kind
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        debug_assert_eq!(x.len(), self.dim);
        match &self.kind {
            ConeKind::Orthant => x.iter().all(|v| *v >= -tol),
            ConeKind::Lorentz { axis } => x[*axis] >= rest_norm(x, *axis) - tol,
            ConeKind::Polyhedral { duals, .. } => duals.iter().all(|d| dot(d, x) >= -tol),
        }
    }

    /// A linear form that is strictly positive on `C \ {0}`.
    pub fn interior_functional(&self) -> PositiveFunctional {
        let n = self.dim;
        let coefficients = match &self.kind {
            ConeKind::Orthant => vec![1.0; n],
            ConeKind::Lorentz { axis } => unit(n, *axis),
            ConeKind::Polyhedral { duals, .. } => {
                let mut f = vec![0.0; n];
                for d in duals {
                    add_scaled(&mut f, d, 1.0);
                }
                f
            }
        };
        PositiveFunctional { coefficients }
    }

    /// A point in the interior of the cone.
    pub fn interior_point(&self) -> Vec<f64> {
        let n = self.dim;
        match &self.kind {
            ConeKind::Orthant => vec![1.0 / n as f64; n],
            ConeKind::Lorentz { axis } => unit(n, *axis),
            ConeKind::Polyhedral { generators, .. } => {
                let mut x = vec![0.0; n];
                for g in generators {
                    add_scaled(&mut x, g, 1.0 / generators.len() as f64);
                }
                x
            }
        }
    }

    /// Points whose conic hull is the cone (orthant and polyhedral) or a
    /// deterministic sample of boundary rays (Lorentz).
    pub fn sample_rays(&self) -> Vec<Vec<f64>> {
        let n = self.dim;
        match &self.kind {
            ConeKind::Orthant => (0..n).map(|i| unit(n, i)).collect(),
            ConeKind::Polyhedral { generators, .. } => generators.clone(),
            ConeKind::Lorentz { axis } => {
                let others: Vec<usize> = (0..n).filter(|i| i != axis).collect();
                let m = others.len();
                let mut dirs: Vec<Vec<f64>> = Vec::new();
                for a in 0..m {
                    for s in [1.0, -1.0] {
                        let mut d = vec![0.0; m];
                        d[a] = s;
                        dirs.push(d);
                    }
                    for b in a + 1..m {
                        for (sa, sb) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                            let mut d = vec![0.0; m];
                            d[a] = sa;
                            d[b] = sb;
                            dirs.push(d);
                        }
                    }
                }
                // Quasi-random directions from a Weyl sequence.
                for k in 1..=64 {
                    let d: Vec<f64> = (0..m)
                        .map(|j| {
                            let alpha = (2.0 + j as f64).sqrt().fract();
                            (std::f64::consts::TAU * (k as f64 * alpha).fract()).sin()
                        })
                        .collect();
                    dirs.push(d);
                }
                let mut rays: Vec<Vec<f64>> = dirs
                    .into_iter()
                    .filter_map(|d| {
                        let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
                        (norm > 0.0).then(|| {
                            let mut x = vec![0.0; n];
                            x[*axis] = 1.0;
                            for (k, &i) in others.iter().enumerate() {
                                x[i] = d[k] / norm;
                            }
                            x
                        })
                    })
                    .collect();
                rays.push(unit(n, *axis));
                rays
            }
        }
    }

    /// Checks that `t` maps the cone into itself, on generators for orthant
    /// and polyhedral cones and on sampled boundary rays for Lorentz cones.
    pub fn check_preserved(&self, t: &DMatrix<f64>) -> Result<()> {
        if t.nrows() != self.dim || t.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: t.nrows(),
            });
        }
        for ray in self.sample_rays() {
            let y = mat_vec(t, &ray);
            let scale = norm1(&y).max(norm1(&ray)).max(1.0);
            if !self.contains(&y, 1e-10 * scale) {
                return Err(Error::ConeNotPreserved(format!(
                    "image of {ray:?} is {y:?}"
                )));
            }
        }
        Ok(())
    }
}

fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[i] = 1.0;
    e
}

fn rest_norm(x: &[f64], axis: usize) -> f64 {
    x.iter()
        .enumerate()
        .filter(|(i, _)| *i != axis)
        .map(|(_, v)| v * v)
        .sum::<f64>()
        .sqrt()
}

fn add_scaled(acc: &mut [f64], x: &[f64], s: f64) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a += s * b;
    }
}

pub(crate) fn mat_vec(t: &DMatrix<f64>, x: &[f64]) -> Vec<f64> {
    (t * DVector::from_column_slice(x)).as_slice().to_vec()
}

/// Induced 1-norm (largest absolute column sum).
pub fn operator_norm1(t: &DMatrix<f64>) -> f64 {
    t.column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn cone_contains(c: &ConvexCone, x: &[f64], tol: f64) -> Result<bool> {
    if x.len() != c.dim() {
        return Err(Error::DimensionMismatch {
            left: c.dim(),
            right: x.len(),
        });
    }
    Ok(c.contains(x, tol))
}

/// Splits `x = x_plus - x_minus` with both parts in the cone, using the
/// smallest correction for each cone kind.
pub fn decompose(c: &ConvexCone, x: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = c.dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: x.len(),
        });
    }
    match c.kind() {
        ConeKind::Orthant => Ok((
            x.iter().map(|v| v.max(0.0)).collect(),
            x.iter().map(|v| (-v).max(0.0)).collect(),
        )),
        ConeKind::Lorentz { axis } => {
            let s = (rest_norm(x, *axis) - x[*axis]).max(0.0);
            let mut plus = x.to_vec();
            plus[*axis] += s;
            Ok((plus, unit(n, *axis).into_iter().map(|v| v * s).collect()))
        }
        ConeKind::Polyhedral { generators, .. } => {
            let g = DMatrix::from_fn(n, generators.len(), |i, j| generators[j][i]);
            let coeffs = g
                .svd(true, true)
                .solve(&DVector::from_column_slice(x), 1e-12)
                .map_err(|e| Error::Decomposition(e.to_string()))?;
            let mut plus = vec![0.0; n];
            let mut minus = vec![0.0; n];
            for (gen, &l) in generators.iter().zip(coeffs.iter()) {
                if l > 0.0 {
                    add_scaled(&mut plus, gen, l);
                } else {
                    add_scaled(&mut minus, gen, -l);
                }
            }
            let err: f64 = plus
                .iter()
                .zip(&minus)
                .zip(x)
                .map(|((p, m), v)| (p - m - v).abs())
                .sum();
            if err > 1e-10 * norm1(x).max(1.0) {
                return Err(Error::Decomposition(format!(
                    "generators do not reproduce x (error {err:e})"
                )));
            }
            Ok((plus, minus))
        }
    }
}

/// Linear form `x -> f . x`, nonnegative on a given cone.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveFunctional {
    pub coefficients: Vec<f64>,
}

impl PositiveFunctional {
    pub fn eval(&self, x: &[f64]) -> f64 {
        dot(&self.coefficients, x)
    }
}

/// A positive linear form with `f(u) > 0`, for `u` outside `-C`.
pub fn separating_functional(c: &ConvexCone, u: &[f64]) -> Result<PositiveFunctional> {
    let n = c.dim();
    if u.len() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: u.len(),
        });
    }
    let neg: Vec<f64> = u.iter().map(|v| -v).collect();
    let tol = MEMBERSHIP_TOL * norm1(u).max(1.0);
    if c.contains(&neg, tol) {
        return Err(Error::InNegativeCone);
    }
    let coefficients = match c.kind() {
        ConeKind::Orthant => u.iter().map(|&v| if v > 0.0 { 1.0 } else { 0.0 }).collect(),
        ConeKind::Lorentz { axis } => {
            let r = rest_norm(u, *axis);
            let mut f: Vec<f64> = if r > 0.0 {
                u.iter().map(|v| v / r).collect()
            } else {
                vec![0.0; n]
            };
            f[*axis] = 1.0;
            f
        }
        ConeKind::Polyhedral { duals, .. } => duals
            .iter()
            .max_by(|a, b| dot(a, u).total_cmp(&dot(b, u)))
            .cloned()
            .ok_or(Error::InNegativeCone)?,
    };
    let f = PositiveFunctional { coefficients };
    if !(f.eval(u) > 0.0) {
        return Err(Error::InNegativeCone);
    }
    Ok(f)
}

/// The rank-one operator `x -> (f(x) / f(u)) v_plus`.
pub fn rank_one_b(
    c: &ConvexCone,
    f: &PositiveFunctional,
    u: &[f64],
    v_plus: &[f64],
) -> Result<DMatrix<f64>> {
    let n = c.dim();
    if u.len() != n || v_plus.len() != n || f.coefficients.len() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: u.len(),
        });
    }
    let fu = f.eval(u);
    if !(fu > 0.0) {
        return Err(Error::Precondition(format!("f(u) = {fu} is not positive")));
    }
    if !c.contains(v_plus, 1e-10 * norm1(v_plus).max(1.0)) {
        return Err(Error::Precondition("v_plus is not in the cone".into()));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| {
        v_plus[i] * f.coefficients[j] / fu
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenMethod {
    /// A nonzero cone vector is mapped to zero.
    Annihilated,
    /// Averaged normalized iteration, possibly polished by inverse
    /// iteration.
    Iteration,
    /// Average over a detected cycle of the plain normalized iteration.
    Cesaro,
    /// Filtered from the dense eigensolver after the iterations failed.
    OracleAssisted,
}

/// Eigenvalue and cone eigenvector, with `||vector||_1 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeEigenpair {
    pub eigenvalue: f64,
    pub vector: Vec<f64>,
    /// `||T v - eigenvalue v||_1`.
    pub residual: f64,
    pub iterations: usize,
    pub method: EigenMethod,
}

/// Iteration budget of the averaged map.
pub const CONE_ITER_BUDGET: usize = 20_000;
const CONE_RESIDUAL_TOL: f64 = 1e-10;

fn unit_norm(mut x: Vec<f64>) -> Vec<f64> {
    let s = norm1(&x);
    if s > 0.0 {
        x.iter_mut().for_each(|v| *v /= s);
    }
    x
}

fn eigen_estimate(t: &DMatrix<f64>, phi: &PositiveFunctional, x: &[f64]) -> (f64, f64) {
    let y = mat_vec(t, x);
    let lambda = phi.eval(&y) / phi.eval(x);
    let res = y
        .iter()
        .zip(x)
        .map(|(a, b)| (a - lambda * b).abs())
        .sum::<f64>()
        / norm1(x);
    (lambda, res)
}

/// Few steps of inverse iteration shifted just above `lambda`; the result is
/// accepted only if it stays in the cone and lowers the residual.
fn polish(
    c: &ConvexCone,
    t: &DMatrix<f64>,
    phi: &PositiveFunctional,
    x: &[f64],
    lambda: f64,
    residual: f64,
) -> Option<(Vec<f64>, f64, f64)> {
    let n = c.dim();
    let scale = lambda.abs().max(operator_norm1(t)).max(1e-300);
    let mut best: Option<(Vec<f64>, f64, f64)> = None;
    let mut cur = x.to_vec();
    let mut sigma = lambda + 1e-10 * scale;
    for _ in 0..6 {
        let m = DMatrix::from_fn(n, n, |i, j| if i == j { sigma } else { 0.0 }) - t;
        let y = m.lu().solve(&DVector::from_column_slice(&cur))?;
        let mut y: Vec<f64> = y.as_slice().to_vec();
        if !y.iter().all(|v| v.is_finite()) {
            break;
        }
        if phi.eval(&y) < 0.0 {
            y.iter_mut().for_each(|v| *v = -*v);
        }
        let y = unit_norm(y);
        if !c.contains(&y, 1e-9) {
            break;
        }
        let (l, r) = eigen_estimate(t, phi, &y);
        if r < best.as_ref().map_or(residual, |b| b.2) {
            best = Some((y.clone(), l, r));
        }
        cur = y;
        sigma = l + 1e-12 * scale;
        if r <= CONE_RESIDUAL_TOL * scale.max(1.0) * 1e-3 {
            break;
        }
    }
    best
}

fn null_vectors(m: &DMatrix<f64>, rel: f64) -> Vec<Vec<f64>> {
    let n = m.ncols();
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let top = svd
        .singular_values
        .iter()
        .fold(0.0_f64, |a, b| a.max(*b))
        .max(1.0);
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= rel * top)
        .map(|(k, _)| (0..n).map(|j| v_t[(k, j)]).collect())
        .collect()
}

/// Cone vector in the null space of `m`, trying each basis vector with
/// both signs and the projection of an interior point.
fn cone_null_vector(c: &ConvexCone, m: &DMatrix<f64>, rel: f64) -> Option<Vec<f64>> {
    let basis = null_vectors(m, rel);
    if basis.is_empty() {
        return None;
    }
    let x0 = c.interior_point();
    let mut proj = vec![0.0; c.dim()];
    for b in &basis {
        add_scaled(&mut proj, b, dot(b, &x0));
    }
    let mut candidates = vec![proj];
    for b in basis {
        candidates.push(b.iter().map(|v| -v).collect());
        candidates.push(b);
    }
    candidates
        .into_iter()
        .filter(|x| norm1(x) > 1e-8)
        .map(unit_norm)
        .find(|x| c.contains(x, 1e-9))
}

/// Largest real eigenvalue with an eigenvector in the cone, from the dense
/// eigensolver.
pub(crate) fn oracle_cone_eigenvector(t: &DMatrix<f64>, c: &ConvexCone) -> Option<(f64, Vec<f64>)> {
    let n = c.dim();
    let scale = operator_norm1(t).max(1.0);
    spectrum::eigenvalues_real(t)
        .into_iter()
        .filter(|z| z.im.abs() <= 1e-9 * scale)
        .find_map(|z| {
            let shifted = t - DMatrix::<f64>::identity(n, n) * z.re;
            cone_null_vector(c, &shifted, 1e-8).map(|v| (z.re, v))
        })
}

/// Eigenvector of a cone-preserving operator inside the cone.
pub fn cone_eigenvector_finite(t: &DMatrix<f64>, c: &ConvexCone) -> Result<ConeEigenpair> {
    c.check_preserved(t)?;
    if let Some(v) = cone_null_vector(c, t, 1e-12) {
        let residual = norm1(&mat_vec(t, &v));
        return Ok(ConeEigenpair {
            eigenvalue: 0.0,
            vector: v,
            residual,
            iterations: 0,
            method: EigenMethod::Annihilated,
        });
    }
    cone_eigenvector_from(t, c, &c.interior_point())
}

/// As [`cone_eigenvector_finite`] without the preservation and annihilation
/// checks, starting from `x0` in the cone.
pub(crate) fn cone_eigenvector_from(
    t: &DMatrix<f64>,
    c: &ConvexCone,
    x0: &[f64],
) -> Result<ConeEigenpair> {
    let phi = c.interior_functional();
    let scale = operator_norm1(t).max(1.0);
    let tol = CONE_RESIDUAL_TOL * scale;
    let mut x: Vec<f64> = x0.iter().map(|v| v / phi.eval(x0)).collect();
    let mut best = (x.clone(), f64::NAN, f64::INFINITY);
    let mut iterations = 0;
    while iterations < CONE_ITER_BUDGET {
        let y = mat_vec(t, &x);
        let fy = phi.eval(&y);
        if !(fy > 1e-300) {
            // T x = 0 for a nonzero cone vector.
            return Ok(ConeEigenpair {
                eigenvalue: 0.0,
                vector: unit_norm(x),
                residual: norm1(&y),
                iterations,
                method: EigenMethod::Annihilated,
            });
        }
        let (lambda, res) = eigen_estimate(t, &phi, &x);
        if res < best.2 {
            best = (x.clone(), lambda, res);
        }
        if res <= tol {
            break;
        }
        if iterations % 64 == 63 {
            if let Some((z, l, r)) = polish(c, t, &phi, &x, lambda, res) {
                if r < best.2 {
                    best = (z.clone(), l, r);
                }
                if r <= tol {
                    break;
                }
            }
        }
        x = x.iter().zip(&y).map(|(a, b)| 0.5 * (a + b / fy)).collect();
        iterations += 1;
    }
    if best.2 <= tol {
        return Ok(ConeEigenpair {
            eigenvalue: best.1,
            vector: unit_norm(best.0),
            residual: best.2,
            iterations,
            method: EigenMethod::Iteration,
        });
    }
    if let Some(pair) = cesaro(t, c, &phi, &best.0, tol) {
        return Ok(pair);
    }
    match oracle_cone_eigenvector(t, c) {
        Some((lambda, v)) => {
            let residual = mat_vec(t, &v)
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - lambda * b).abs())
                .sum();
            Ok(ConeEigenpair {
                eigenvalue: lambda,
                vector: v,
                residual,
                iterations,
                method: EigenMethod::OracleAssisted,
            })
        }
        None => Err(Error::NonConvergence {
            iterations,
            residual: best.2,
        }),
    }
}

/// Runs the plain normalized map, looks for a cycle of length up to 64 in
/// its tail and averages over it.
fn cesaro(
    t: &DMatrix<f64>,
    c: &ConvexCone,
    phi: &PositiveFunctional,
    x0: &[f64],
    tol: f64,
) -> Option<ConeEigenpair> {
    const TAIL: usize = 4096;
    const MAX_CYCLE: usize = 64;
    let mut x = x0.to_vec();
    let mut tail: Vec<Vec<f64>> = Vec::with_capacity(TAIL);
    for _ in 0..TAIL {
        let y = mat_vec(t, &x);
        let fy = phi.eval(&y);
        if !(fy > 0.0) {
            return None;
        }
        x = y.into_iter().map(|v| v / fy).collect();
        tail.push(x.clone());
    }
    let last = tail.last()?;
    let m = (1..=MAX_CYCLE).min_by(|&a, &b| {
        let da: f64 = tail[TAIL - 1 - a]
            .iter()
            .zip(last)
            .map(|(p, q)| (p - q).abs())
            .sum();
        let db: f64 = tail[TAIL - 1 - b]
            .iter()
            .zip(last)
            .map(|(p, q)| (p - q).abs())
            .sum();
        da.total_cmp(&db)
    })?;
    let mut avg = vec![0.0; c.dim()];
    for v in &tail[TAIL - m..] {
        add_scaled(&mut avg, v, 1.0 / m as f64);
    }
    let (lambda, res) = eigen_estimate(t, phi, &avg);
    (res <= tol && c.contains(&avg, 1e-9)).then(|| ConeEigenpair {
        eigenvalue: lambda,
        vector: unit_norm(avg),
        residual: res,
        iterations: TAIL,
        method: EigenMethod::Cesaro,
    })
}
