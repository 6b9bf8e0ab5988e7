//! Perron root and vector of nonnegative matrices with Collatz–Wielandt
//! certificates.
//!
//! The main iteration is the normalized map `x -> Bx / ||Bx||_1` on the unit
//! simplex, applied to the surrogate `B = (I + A) / 2`. The surrogate shares
//! its eigenvectors with `A`, has positive diagonal (so periodic matrices do
//! not make the iterates oscillate) and `rho(A) = 2 rho(B) - 1`. When the
//! geometric rate is poor the iterate is polished by shifted inverse
//! iteration with the Collatz–Wielandt upper bound as shift, which keeps
//! every iterate strictly positive.

use crate::error::{Error, Result};
use crate::linalg::{self, Lu};
use crate::matrix::{
    entrywise_abs, ComplexMatrix, NonnegativeMatrix, OrderedVector, POSITIVITY_TOL,
};
use crate::spectrum;
use crate::structure;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 100_000;

/// Relative threshold for declaring two spectral radii equal.
pub const RADIUS_EQ_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerronOptions {
    /// Target for `||A v - rho v||_1`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PerronOptions {
    fn default() -> Self {
        PerronOptions {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

/// Spectral radius estimate with its Collatz–Wielandt enclosure.
#[derive(Debug, Clone, PartialEq)]
pub struct PerronCertificate {
    pub rho: f64,
    /// Nonnegative, unit 1-norm.
    pub vector: OrderedVector,
    pub cw_lower: f64,
    pub cw_upper: f64,
    /// `||A v - rho v||_1`.
    pub residual: f64,
    pub iterations: usize,
    pub strictly_positive: bool,
    /// Decided on the support before iterating; `rho` is then exactly zero.
    pub nilpotent: bool,
    pub converged: bool,
    pub simplicity: Option<SimplicityReport>,
}

/// Collatz–Wielandt lower and upper ratios at `x`.
///
/// Coordinates with `x_j = 0` and `(Ax)_j = 0` carry no information and are
/// skipped; a coordinate with `x_j = 0 < (Ax)_j` makes the upper ratio
/// infinite.
pub fn collatz_wielandt(a: &NonnegativeMatrix, x: &OrderedVector) -> Result<(f64, f64)> {
    if x.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: x.len(),
        });
    }
    x.check_nonnegative()?;
    Ok(cw_bounds(a, x.coords()))
}

fn cw_bounds(a: &NonnegativeMatrix, x: &[f64]) -> (f64, f64) {
    let ax = a.mul_slice(x);
    let mut lower = f64::INFINITY;
    let mut upper: f64 = 0.0;
    for (&axj, &xj) in ax.iter().zip(x) {
        if xj > 0.0 {
            let r = axj / xj;
            lower = lower.min(r);
            upper = upper.max(r);
        } else if axj > 0.0 {
            upper = f64::INFINITY;
        }
    }
    (lower, upper)
}

/// `rho = ||Av||_1` and `||Av - rho v||_1` for a unit simplex point `v`.
fn rayleigh(a: &NonnegativeMatrix, v: &[f64]) -> (f64, f64) {
    let av = a.mul_slice(v);
    let rho: f64 = av.iter().sum();
    let res = av.iter().zip(v).map(|(p, q)| (p - rho * q).abs()).sum();
    (rho, res)
}

fn normalized(mut y: Vec<f64>) -> Option<Vec<f64>> {
    for v in y.iter_mut() {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    let s: f64 = y.iter().sum();
    (s > 0.0 && s.is_finite()).then(|| y.into_iter().map(|v| v / s).collect())
}

/// One shifted inverse iteration step `(sigma I - A) y = x` with `sigma`
/// the Collatz–Wielandt upper ratio at `x`.
fn noda_step(a: &NonnegativeMatrix, x: &[f64]) -> Option<Vec<f64>> {
    let (_, upper) = cw_bounds(a, x);
    if !upper.is_finite() {
        return None;
    }
    let n = a.dim();
    let mut m: Vec<f64> = a.entries().iter().map(|v| -v).collect();
    for i in 0..n {
        m[i * n + i] += upper;
    }
    normalized(Lu::factor(n, m).solve(x)?)
}

fn certificate(
    a: &NonnegativeMatrix,
    v: Vec<f64>,
    iterations: usize,
    tol: f64,
) -> PerronCertificate {
    let (rho, residual) = rayleigh(a, &v);
    let (cw_lower, cw_upper) = cw_bounds(a, &v);
    let vector = OrderedVector::from_vec(v);
    PerronCertificate {
        rho,
        strictly_positive: vector.is_strictly_positive(),
        vector,
        cw_lower,
        cw_upper,
        residual,
        iterations,
        nilpotent: false,
        converged: residual <= tol,
        simplicity: None,
    }
}

fn nilpotent_certificate(a: &NonnegativeMatrix) -> PerronCertificate {
    let n = a.dim();
    // A nilpotent support digraph is acyclic, so some column is zero and the
    // matching basis vector is annihilated.
    let j = (0..n)
        .find(|&j| (0..n).all(|i| a.get(i, j) == 0.0))
        .expect("nilpotent matrix has a zero column");
    let vector = OrderedVector::basis(n, j);
    PerronCertificate {
        rho: 0.0,
        strictly_positive: vector.is_strictly_positive(),
        vector,
        cw_lower: 0.0,
        cw_upper: 0.0,
        residual: 0.0,
        iterations: 0,
        nilpotent: true,
        converged: true,
        simplicity: None,
    }
}

fn iterate(a: &NonnegativeMatrix, opts: PerronOptions, jump: bool) -> Result<PerronCertificate> {
    let n = a.dim();
    let surrogate = a.half_shifted();
    let mut x = vec![1.0 / n as f64; n];
    let mut best = certificate(a, x.clone(), 0, opts.tol);
    if best.converged {
        return Ok(best);
    }
    let mut checkpoint = best.residual;
    let mut polishing = false;
    for it in 1..=opts.max_iter {
        if !polishing && it % 32 == 0 {
            if best.residual > 0.25 * checkpoint {
                polishing = true;
                // Positive start for the shifted solves on irreducible input.
                if jump {
                    x = improve_bound_raw(a, &x).unwrap_or(x);
                }
            }
            checkpoint = best.residual;
        }
        let polished = if polishing { noda_step(a, &x) } else { None };
        x = match polished {
            Some(y) => y,
            None => {
                polishing = false;
                normalized(surrogate.mul_slice(&x)).unwrap_or(x)
            }
        };
        let cert = certificate(a, x.clone(), it, opts.tol);
        if cert.residual < best.residual || cert.converged {
            best = cert;
        }
        if best.converged {
            return Ok(best);
        }
    }
    Err(Error::PerronNonConvergence(Box::new(best)))
}

/// Perron root and a nonnegative eigenvector of any nonnegative matrix.
///
/// Nilpotency is decided on the support first, giving `rho = 0` exactly.
pub fn perron_fixed_point(
    a: &NonnegativeMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<PerronCertificate> {
    if !(tol > 0.0) {
        return Err(Error::Precondition("tolerance must be positive".into()));
    }
    if structure::is_nilpotent(a) {
        return Ok(nilpotent_certificate(a));
    }
    iterate(a, PerronOptions { tol, max_iter }, false)
}

/// `(I + A)^(n-1) x`, normalized, without precondition checks.
fn improve_bound_raw(a: &NonnegativeMatrix, x: &[f64]) -> Option<Vec<f64>> {
    let n = a.dim();
    let mut y = x.to_vec();
    for _ in 0..n.saturating_sub(1) {
        let ay = a.mul_slice(&y);
        y = y.iter().zip(&ay).map(|(p, q)| p + q).collect();
        let s: f64 = y.iter().sum();
        y.iter_mut().for_each(|v| *v /= s);
    }
    normalized(y)
}

/// Given `Ax >= r x` with `Ax != r x`, returns the normalized
/// `y = (I + A)^(n-1) x` and its lower ratio `min_j (Ay)_j / y_j`, which
/// strictly exceeds `r` for irreducible `A`.
pub fn improve_bound(
    a: &NonnegativeMatrix,
    x: &OrderedVector,
    r: f64,
) -> Result<(OrderedVector, f64)> {
    if x.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: x.len(),
        });
    }
    x.check_nonnegative()?;
    if !structure::is_irreducible(a).irreducible {
        return Err(Error::Reducible);
    }
    let ax = a.mul_slice(x.coords());
    let scale = ax
        .iter()
        .chain(x.coords())
        .fold(0.0_f64, |m, v| m.max(v.abs()))
        .max(1.0);
    let slack = 1e-12 * scale;
    if ax.iter().zip(x.coords()).any(|(p, q)| *p < r * q - slack) {
        return Err(Error::Precondition("A x >= r x does not hold".into()));
    }
    if ax.iter().zip(x.coords()).all(|(p, q)| *p == r * q) {
        return Err(Error::Precondition(
            "A x = r x; no improvement possible".into(),
        ));
    }
    let y = improve_bound_raw(a, x.coords()).ok_or(Error::ZeroVector)?;
    let (r_new, _) = cw_bounds(a, &y);
    Ok((OrderedVector::from_vec(y), r_new))
}

/// Perron pair of an irreducible matrix, with the eigenvector checked to be
/// strictly positive and the eigenvalue checked to be simple.
pub fn perron_irreducible(a: &NonnegativeMatrix, tol: f64) -> Result<PerronCertificate> {
    perron_irreducible_with(
        a,
        PerronOptions {
            tol,
            ..PerronOptions::default()
        },
    )
}

pub fn perron_irreducible_with(
    a: &NonnegativeMatrix,
    opts: PerronOptions,
) -> Result<PerronCertificate> {
    if !(opts.tol > 0.0) {
        return Err(Error::Precondition("tolerance must be positive".into()));
    }
    if !structure::is_irreducible(a).irreducible {
        return Err(Error::Reducible);
    }
    let mut cert = iterate(a, opts, true)?;
    let n = a.dim();
    if let Some((index, &value)) = cert
        .vector
        .coords()
        .iter()
        .enumerate()
        .find(|(_, &v)| v <= POSITIVITY_TOL)
    {
        return Err(Error::PositivityBreakdown { index, value });
    }
    if !(cert.rho > 0.0) && !(n == 1 && a.get(0, 0) == 0.0) {
        return Err(Error::PositivityBreakdown {
            index: 0,
            value: cert.rho,
        });
    }
    cert.simplicity = Some(simplicity_check(a, cert.rho)?);
    Ok(cert)
}

/// Derivative of the characteristic polynomial at `rho`, computed as the sum
/// of the characteristic polynomials of the principal `(n-1)`-minors.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplicityReport {
    pub derivative_value: f64,
    /// `det(rho I - A_j)` where `A_j` deletes row and column `j`.
    pub summand_values: Vec<f64>,
    pub simple: bool,
    /// Central difference of `det(X I - A)` at `rho`.
    pub fd_crosscheck: f64,
    pub threshold: f64,
}

fn char_poly_at(a: &NonnegativeMatrix, x: f64) -> f64 {
    let n = a.dim();
    let mut m: Vec<f64> = a.entries().iter().map(|v| -v).collect();
    for i in 0..n {
        m[i * n + i] += x;
    }
    linalg::det(n, m)
}

pub fn simplicity_check(a: &NonnegativeMatrix, rho: f64) -> Result<SimplicityReport> {
    if !(rho >= 0.0) {
        return Err(Error::Precondition("rho must be nonnegative".into()));
    }
    let n = a.dim();
    let summand_values: Vec<f64> = (0..n)
        .map(|j| {
            let mut minor: Vec<f64> = a.minor_without(j).iter().map(|v| -v).collect();
            for i in 0..n - 1 {
                minor[i * (n - 1) + i] += rho;
            }
            linalg::det(n - 1, minor)
        })
        .collect();
    let derivative_value: f64 = summand_values.iter().sum();
    let h = 1e-5 * rho.max(1.0);
    let fd_crosscheck = (char_poly_at(a, rho + h) - char_poly_at(a, rho - h)) / (2.0 * h);
    let threshold = 1e-8 * rho.max(1.0).powi(n as i32 - 1);
    Ok(SimplicityReport {
        derivative_value,
        summand_values,
        simple: derivative_value > threshold,
        fd_crosscheck,
        threshold,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    DominatedStrict,
    DominatedEqRadius,
    NotDominated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominanceReport {
    pub verdict: Dominance,
    pub rho_b: Option<f64>,
    pub rho_m: f64,
    /// Equal-radius branch only: `|B| = M` within `1e-9`.
    pub abs_equals_m: Option<bool>,
    /// Equal-radius branch only: `|x|` is a Perron vector of `M` for every
    /// peripheral eigenvector `x` of `B`.
    pub peripheral_moduli_are_perron: Option<bool>,
}

/// Compares a complex matrix against a nonnegative irreducible majorant.
pub fn dominance_compare(b: &ComplexMatrix, m: &NonnegativeMatrix) -> Result<DominanceReport> {
    if b.dim() != m.dim() {
        return Err(Error::DimensionMismatch {
            left: b.dim(),
            right: m.dim(),
        });
    }
    let perron = perron_irreducible(m, DEFAULT_TOL)?;
    let rho_m = perron.rho;
    let abs_b = entrywise_abs(b);
    let dominated = abs_b
        .entries()
        .iter()
        .zip(m.entries())
        .all(|(x, y)| *x <= *y * (1.0 + 1e-12));
    if !dominated {
        return Ok(DominanceReport {
            verdict: Dominance::NotDominated,
            rho_b: None,
            rho_m,
            abs_equals_m: None,
            peripheral_moduli_are_perron: None,
        });
    }
    let bd = b.to_dmatrix();
    let spectrum = spectrum::eigenvalues_complex(&bd);
    let rho_b = spectrum.first().map_or(0.0, |z| z.norm());
    let eq_tol = RADIUS_EQ_TOL * rho_m.max(1.0);
    if (rho_b - rho_m).abs() > eq_tol {
        return Ok(DominanceReport {
            verdict: Dominance::DominatedStrict,
            rho_b: Some(rho_b),
            rho_m,
            abs_equals_m: None,
            peripheral_moduli_are_perron: None,
        });
    }
    let mmax = m.entries().iter().fold(0.0_f64, |p, q| p.max(*q)).max(1.0);
    let abs_equals_m = abs_b
        .entries()
        .iter()
        .zip(m.entries())
        .all(|(x, y)| (x - y).abs() <= 1e-9 * mmax);
    let perron_v = perron.vector.coords();
    let peripheral_ok = spectrum
        .iter()
        .filter(|z| (z.norm() - rho_m).abs() <= eq_tol)
        .all(|&lambda| {
            spectrum::eigenvector_complex(&bd, lambda).is_some_and(|x| {
                let moduli: Vec<f64> = x.iter().map(|z| z.norm()).collect();
                let s: f64 = moduli.iter().sum();
                moduli
                    .iter()
                    .zip(perron_v)
                    .map(|(p, q)| (p / s - q).abs())
                    .sum::<f64>()
                    <= 1e-6
            })
        });
    Ok(DominanceReport {
        verdict: Dominance::DominatedEqRadius,
        rho_b: Some(rho_b),
        rho_m,
        abs_equals_m: Some(abs_equals_m),
        peripheral_moduli_are_perron: Some(peripheral_ok),
    })
}

/// Eigenvector of `A` assembled from an eigenvector `v` of `A^p` with
/// eigenvalue `nu > 0`: `w = sum_{i<p} nu^((p-1-i)/p) A^i v` satisfies
/// `A w = nu^(1/p) w`.
pub(crate) fn lift_power_eigenvector(
    apply: impl Fn(&[f64]) -> Vec<f64>,
    v: &[f64],
    nu: f64,
    p: u64,
) -> Vec<f64> {
    let mut w = vec![0.0; v.len()];
    let mut term = v.to_vec();
    for i in 0..p {
        let c = nu.powf((p - 1 - i) as f64 / p as f64);
        for (wk, tk) in w.iter_mut().zip(&term) {
            *wk += c * tk;
        }
        if i + 1 < p {
            term = apply(&term);
        }
    }
    w
}

/// Result of the lower-bound extraction from `A^p x >= lambda^p x`.
#[derive(Debug, Clone, PartialEq)]
pub struct KreinRutmanLift {
    /// Eigenvalue of `A`, at least `lambda`.
    pub mu: f64,
    /// Nonnegative eigenvector of `A`, unit 1-norm.
    pub vector: OrderedVector,
    /// Eigenvalue of `A^p` found on the invariant set.
    pub power_eigenvalue: f64,
    pub iterations: usize,
}

/// From `x >= 0` with `A^p x >= lambda^p x`, finds a nonnegative eigenvector
/// of `A` whose eigenvalue is at least `lambda`.
pub fn krein_rutman_lower(
    a: &NonnegativeMatrix,
    x: &OrderedVector,
    p: u64,
    lambda: f64,
) -> Result<KreinRutmanLift> {
    if x.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: x.len(),
        });
    }
    x.check_nonnegative()?;
    if p == 0 {
        return Err(Error::Precondition("p must be at least 1".into()));
    }
    if !(lambda > 0.0) {
        return Err(Error::Precondition("lambda must be positive".into()));
    }
    let t = a.pow(p);
    let floor = lambda.powf(p as f64);
    let x0 = x.normalize_1()?.into_coords();
    let tx = t.mul_slice(&x0);
    let slack = 1e-12 * tx.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    if tx.iter().zip(&x0).any(|(p, q)| *p < floor * q - slack) {
        return Err(Error::Precondition(
            "A^p x >= lambda^p x does not hold".into(),
        ));
    }

    // Averaged fixed-point map on {y >= 0, ||y||_1 = 1, T y >= lambda^p y},
    // which the map preserves.
    let max_iter = DEFAULT_MAX_ITER;
    let tol = 1e-11;
    let mut y = x0;
    let mut iterations = 0;
    let mut residual = f64::INFINITY;
    let mut checkpoint = f64::INFINITY;
    let mut nu = 0.0;
    while iterations < max_iter {
        let (r, res) = rayleigh(&t, &y);
        nu = r;
        residual = res;
        if res <= tol * r.max(1.0) {
            break;
        }
        iterations += 1;
        let stalled = iterations % 32 == 0 && res > 0.25 * checkpoint;
        if iterations % 32 == 0 {
            checkpoint = res;
        }
        if stalled {
            if let Some(z) = noda_step(&t, &y) {
                y = z;
                continue;
            }
        }
        let ty = t.mul_slice(&y);
        y = y.iter().zip(&ty).map(|(p, q)| 0.5 * (p + q / r)).collect();
    }
    if residual > tol * nu.max(1.0) {
        return Err(Error::NonConvergence {
            iterations,
            residual,
        });
    }
    let w = lift_power_eigenvector(|v| a.mul_slice(v), &y, nu, p);
    let w = normalized(w).ok_or(Error::ZeroVector)?;
    Ok(KreinRutmanLift {
        mu: nu.powf(1.0 / p as f64),
        vector: OrderedVector::from_vec(w),
        power_eigenvalue: nu,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn m<const N: usize>(rows: [[f64; N]; N]) -> NonnegativeMatrix {
        NonnegativeMatrix::from_rows(&rows).unwrap()
    }

    fn v(c: &[f64]) -> OrderedVector {
        OrderedVector::new(c.to_vec()).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn cw_examples() {
        let (lo, hi) = collatz_wielandt(&m([[1.0, 1.0], [1.0, 1.0]]), &v(&[0.5, 0.5])).unwrap();
        assert_eq!((lo, hi), (2.0, 2.0));
        let (lo, hi) = collatz_wielandt(&m([[0.0, 1.0], [1.0, 0.0]]), &v(&[0.25, 0.75])).unwrap();
        assert!(close(lo, 1.0 / 3.0, 1e-15) && close(hi, 3.0, 1e-15));
        let (lo, hi) = collatz_wielandt(
            &NonnegativeMatrix::identity(3).unwrap(),
            &v(&[0.2, 0.3, 0.5]),
        )
        .unwrap();
        assert_eq!((lo, hi), (1.0, 1.0));
        assert_eq!(
            collatz_wielandt(&NonnegativeMatrix::identity(2).unwrap(), &v(&[0.0, 0.0])),
            Err(Error::ZeroVector)
        );
    }

    #[test]
    fn cw_support_conventions() {
        // x_j = 0 with (Ax)_j > 0 makes the upper ratio infinite
        let (lo, hi) = collatz_wielandt(&m([[0.0, 1.0], [1.0, 0.0]]), &v(&[1.0, 0.0])).unwrap();
        assert_eq!((lo, hi), (0.0, f64::INFINITY));
        // x_j = 0 with (Ax)_j = 0 is skipped
        let (lo, hi) = collatz_wielandt(&m([[2.0, 0.0], [0.0, 1.0]]), &v(&[1.0, 0.0])).unwrap();
        assert_eq!((lo, hi), (2.0, 2.0));
    }

    #[test]
    fn fixed_point_examples() {
        let c = perron_fixed_point(&m([[0.0, 1.0], [0.0, 0.0]]), DEFAULT_TOL, DEFAULT_MAX_ITER)
            .unwrap();
        assert!(c.nilpotent && c.rho == 0.0 && c.residual == 0.0);

        let c = perron_fixed_point(&m([[0.0, 2.0], [3.0, 0.0]]), DEFAULT_TOL, DEFAULT_MAX_ITER)
            .unwrap();
        let s6 = 6f64.sqrt();
        assert!(close(c.rho, s6, 1e-9));
        // (2, sqrt 6) normalized
        assert!(close(c.vector.coords()[0], 2.0 / (2.0 + s6), 1e-9));
        assert!(close(c.vector.coords()[1], s6 / (2.0 + s6), 1e-9));
        assert!(c.cw_lower <= c.rho + 1e-12 && c.rho <= c.cw_upper + 1e-12);

        let c = perron_fixed_point(&m([[1.0, 1.0], [1.0, 1.0]]), DEFAULT_TOL, DEFAULT_MAX_ITER)
            .unwrap();
        assert!(close(c.rho, 2.0, 1e-12));
        assert!(close(c.vector.coords()[0], 0.5, 1e-12));
    }

    #[test]
    fn fixed_point_reducible_jordan_block() {
        // Defective eigenvalue 1; the power map alone converges only like 1/k.
        let a = m([[1.0, 1.0], [0.0, 1.0]]);
        let c = perron_fixed_point(&a, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        assert!(c.residual <= DEFAULT_TOL);
        assert!(c.cw_lower <= 1.0 && 1.0 <= c.cw_upper);
        assert!(close(c.rho, 1.0, 1e-5));
    }

    #[test]
    fn fixed_point_reports_non_convergence() {
        let a = m([[0.0, 2.0], [3.0, 0.0]]);
        match perron_fixed_point(&a, 1e-15, 1) {
            Err(Error::PerronNonConvergence(best)) => {
                assert!(!best.converged);
                assert_eq!(best.vector.len(), 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn improve_bound_examples() {
        let (y, r) = improve_bound(&m([[0.0, 1.0], [1.0, 0.0]]), &v(&[1.0, 0.0]), 0.0).unwrap();
        assert_eq!(y.coords(), &[0.5, 0.5]);
        assert!(close(r, 1.0, 1e-15));

        // (I + A) x = (2, 1); y = (2/3, 1/3); A y = (1, 1); ratios 3/2 and 3.
        let (y, r) = improve_bound(&m([[1.0, 1.0], [1.0, 1.0]]), &v(&[1.0, 0.0]), 1.0).unwrap();
        assert!(close(y.coords()[0], 2.0 / 3.0, 1e-15) && close(y.coords()[1], 1.0 / 3.0, 1e-15));
        assert!(close(r, 1.5, 1e-14));

        // y = (1, 3)/4; A y = (6, 3)/4; ratios 6 and 1.
        let (_, r) = improve_bound(&m([[0.0, 2.0], [3.0, 0.0]]), &v(&[1.0, 0.0]), 0.0).unwrap();
        assert!(close(r, 1.0, 1e-14));

        assert!(matches!(
            improve_bound(&m([[1.0, 1.0], [1.0, 1.0]]), &v(&[0.5, 0.5]), 2.0),
            Err(Error::Precondition(_))
        ));
        assert_eq!(
            improve_bound(&m([[1.0, 1.0], [0.0, 1.0]]), &v(&[1.0, 0.0]), 0.5),
            Err(Error::Reducible)
        );
    }

    #[test]
    fn irreducible_examples() {
        let c = perron_irreducible(&m([[0.0, 1.0], [1.0, 0.0]]), DEFAULT_TOL).unwrap();
        assert!(close(c.rho, 1.0, 1e-12));
        assert!(close(c.vector.coords()[0], 0.5, 1e-12));
        assert!(c.simplicity.as_ref().unwrap().simple);

        let cyc = m([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]);
        let c = perron_irreducible(&cyc, DEFAULT_TOL).unwrap();
        assert!(close(c.rho, 1.0, 1e-12));
        assert!(c
            .vector
            .coords()
            .iter()
            .all(|x| close(*x, 1.0 / 3.0, 1e-12)));

        let c = perron_irreducible(&m([[0.0, 1.0], [1.0, 1.0]]), DEFAULT_TOL).unwrap();
        assert!(close(c.rho, (1.0 + 5f64.sqrt()) / 2.0, 1e-9));
        assert!(c.strictly_positive);

        assert_eq!(
            perron_irreducible(&m([[1.0, 1.0], [0.0, 1.0]]), DEFAULT_TOL),
            Err(Error::Reducible)
        );
    }

    #[test]
    fn simplicity_examples() {
        let r = simplicity_check(&m([[1.0, 1.0], [1.0, 1.0]]), 2.0).unwrap();
        assert_eq!(r.summand_values, vec![1.0, 1.0]);
        assert_eq!(r.derivative_value, 2.0);
        assert!(r.simple);

        let r = simplicity_check(&NonnegativeMatrix::identity(2).unwrap(), 1.0).unwrap();
        assert_eq!(r.summand_values, vec![0.0, 0.0]);
        assert!(!r.simple);

        let r = simplicity_check(&m([[0.0, 1.0], [1.0, 0.0]]), 1.0).unwrap();
        assert_eq!(r.summand_values, vec![1.0, 1.0]);
        assert!(close(r.fd_crosscheck, 2.0, 1e-8));
        assert!(r.simple);
    }

    #[test]
    fn dominance_examples() {
        let c = |re: f64| Complex64::new(re, 0.0);
        let swap = m([[0.0, 1.0], [1.0, 0.0]]);

        let b = ComplexMatrix::from_rows(&[[c(0.0), c(1.0)], [c(-1.0), c(0.0)]]).unwrap();
        let r = dominance_compare(&b, &swap).unwrap();
        assert_eq!(r.verdict, Dominance::DominatedEqRadius);
        assert_eq!(r.abs_equals_m, Some(true));
        assert_eq!(r.peripheral_moduli_are_perron, Some(true));

        let zero = ComplexMatrix::from_real(2, &[0.0; 4]).unwrap();
        assert_eq!(
            dominance_compare(&zero, &swap).unwrap().verdict,
            Dominance::DominatedStrict
        );

        let half = ComplexMatrix::from_real(2, &[0.0, 0.5, 0.5, 0.0]).unwrap();
        let r = dominance_compare(&half, &swap).unwrap();
        assert_eq!(r.verdict, Dominance::DominatedStrict);
        assert!(close(r.rho_b.unwrap(), 0.5, 1e-12));

        let big = ComplexMatrix::from_real(2, &[0.0, 2.0, 0.5, 0.0]).unwrap();
        assert_eq!(
            dominance_compare(&big, &swap).unwrap().verdict,
            Dominance::NotDominated
        );

        let ident = NonnegativeMatrix::identity(2).unwrap();
        assert_eq!(dominance_compare(&zero, &ident), Err(Error::Reducible));
    }

    #[test]
    fn krein_rutman_examples() {
        let r = krein_rutman_lower(&m([[0.0, 1.0], [1.0, 0.0]]), &v(&[0.5, 0.5]), 2, 1.0).unwrap();
        assert!(close(r.mu, 1.0, 1e-12));
        assert!(close(r.vector.coords()[0], 0.5, 1e-12));

        let r = krein_rutman_lower(&m([[1.0, 1.0], [1.0, 1.0]]), &v(&[0.5, 0.5]), 1, 2.0).unwrap();
        assert!(close(r.mu, 2.0, 1e-12));

        let s6 = 6f64.sqrt();
        let x = v(&[2.0 / (2.0 + s6), s6 / (2.0 + s6)]);
        let r = krein_rutman_lower(&m([[0.0, 2.0], [3.0, 0.0]]), &x, 1, 2.0).unwrap();
        assert!(close(r.mu, s6, 1e-9) && r.mu >= 2.0);

        // lifting through an odd power of a 2-cycle
        let r = krein_rutman_lower(&m([[0.0, 2.0], [3.0, 0.0]]), &v(&[0.5, 0.5]), 3, 1.0).unwrap();
        assert!(close(r.mu, s6, 1e-8));

        assert!(matches!(
            krein_rutman_lower(&m([[0.0, 1.0], [1.0, 0.0]]), &v(&[0.5, 0.5]), 1, 2.0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn lift_identity() {
        let a = m([[0.0, 2.0], [3.0, 0.0]]);
        let nu = 6.0;
        // eigenvector of A^2 = diag(6, 6): any vector
        let w = lift_power_eigenvector(|x| a.mul_slice(x), &[1.0, 0.0], nu, 2);
        let aw = a.mul_slice(&w);
        for k in 0..2 {
            assert!(close(aw[k], nu.sqrt() * w[k], 1e-12));
        }
    }
}
