//! Positive eigenvectors of cone-preserving operators in finite dimension.
//!
//! When the peripheral spectrum contains an irrational rotation `e^{i theta}`
//! the eigenvector is reached through a sequence of exact cone eigenvectors
//! of the perturbed powers `A^p + sin(p theta) B`, where `p theta` is close to
//! a full turn and `B` is a rank-one cone-preserving operator. The component
//! of these vectors along the non-peripheral spectral subspace decays
//! geometrically, and their peripheral parts converge to the eigenvector.

use std::f64::consts::{FRAC_PI_2, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::cone::{
    cone_eigenvector_from, decompose, mat_vec, operator_norm1, oracle_cone_eigenvector, rank_one_b,
    separating_functional, ConeEigenpair, ConvexCone, EigenMethod, PositiveFunctional,
};
use crate::error::{Error, Result};
use crate::linalg::norm1;
use crate::perron::lift_power_eigenvector;
use crate::rotation::rotation_approximants;
use crate::spectrum;

/// Eigenvalues within this distance of the unit circle count as peripheral.
pub const PERIPHERAL_TOL: f64 = 1e-8;
/// Numeric floor added to the decay bound.
pub const DECAY_FLOOR: f64 = 1e-12;

pub(crate) fn mat_pow(a: &DMatrix<f64>, mut p: u64) -> DMatrix<f64> {
    let n = a.nrows();
    let mut result = DMatrix::<f64>::identity(n, n);
    let mut base = a.clone();
    while p > 0 {
        if p & 1 == 1 {
            result = &result * &base;
        }
        p >>= 1;
        if p > 0 {
            base = &base * &base;
        }
    }
    result
}

/// Splitting of `R^n` into the peripheral spectral subspace and the rest.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSplit {
    pub operator: DMatrix<f64>,
    pub peripheral_dim: usize,
    /// Peripheral eigenvalues, sorted by decreasing modulus.
    pub peripheral: Vec<Complex64>,
    /// Projection onto the peripheral subspace along the rest.
    pub p_prime: DMatrix<f64>,
    pub p_doubleprime: DMatrix<f64>,
    /// Largest non-peripheral modulus (0 if there is none).
    pub inner_radius: f64,
    pub r_prime: f64,
    /// Quadrature nodes used for the contour integral (0 if not needed).
    pub contour_nodes: usize,
    /// `||P'^2 - P'||_1`.
    pub idempotence_error: f64,
    /// `||A P' - P' A||_1`.
    pub commutation_error: f64,
    /// Moduli of the `peripheral_dim` largest eigenvalues of `A P'`.
    pub restricted_peripheral_moduli: Vec<f64>,
    /// Spectral radius of `A P''`.
    pub restricted_inner_radius: f64,
}

/// Separates the eigenvalues on the unit circle from the rest, for an
/// operator with spectral radius one.
///
/// Eigenvalues with modulus in `(1 - gap_hint, 1 - PERIPHERAL_TOL)` make the
/// split ill-conditioned and are reported as [`Error::NoSpectralGap`]. The
/// projection onto the inner part is the Riesz integral of the resolvent
/// over the circle of radius `r_prime`, evaluated by the trapezoid rule.
pub fn spectral_split(a: &DMatrix<f64>, gap_hint: f64) -> Result<SpectralSplit> {
    let n = a.nrows();
    if a.ncols() != n || n == 0 {
        return Err(Error::DimensionMismatch {
            left: a.nrows(),
            right: a.ncols(),
        });
    }
    if !(gap_hint > 0.0 && gap_hint < 1.0) {
        return Err(Error::Precondition("gap_hint must lie in (0, 1)".into()));
    }
    let eig = spectrum::eigenvalues_real(a);
    let rho = eig[0].norm();
    if (rho - 1.0).abs() > PERIPHERAL_TOL {
        return Err(Error::Precondition(format!(
            "spectral radius {rho} is not 1"
        )));
    }
    let (peripheral, inner): (Vec<Complex64>, Vec<Complex64>) = eig
        .iter()
        .partition(|z| (z.norm() - 1.0).abs() <= PERIPHERAL_TOL);
    let inner_radius = inner.first().map_or(0.0, |z| z.norm());
    if inner_radius > 1.0 - gap_hint {
        return Err(Error::NoSpectralGap {
            modulus: inner_radius,
            threshold: 1.0 - gap_hint,
        });
    }
    let r_prime = 0.5 * (inner_radius + 1.0);
    let (p_doubleprime, contour_nodes) = if inner.is_empty() {
        (DMatrix::zeros(n, n), 0)
    } else {
        let q = (inner_radius / r_prime).max(r_prime);
        let nodes = ((1e-16f64.ln() / q.ln()).ceil() as usize).clamp(16, 8192);
        (riesz_inner_projection(a, r_prime, nodes)?, nodes)
    };
    let ident = DMatrix::<f64>::identity(n, n);
    let p_prime = &ident - &p_doubleprime;
    let idempotence_error = operator_norm1(&(&p_prime * &p_prime - &p_prime));
    let commutation_error = operator_norm1(&(a * &p_prime - &p_prime * a));
    let restricted_peripheral_moduli = spectrum::eigenvalues_real(&(a * &p_prime))
        .iter()
        .take(peripheral.len())
        .map(|z| z.norm())
        .collect();
    let restricted_inner_radius = spectrum::spectral_radius_real(&(a * &p_doubleprime));
    Ok(SpectralSplit {
        operator: a.clone(),
        peripheral_dim: peripheral.len(),
        peripheral,
        p_prime,
        p_doubleprime,
        inner_radius,
        r_prime,
        contour_nodes,
        idempotence_error,
        commutation_error,
        restricted_peripheral_moduli,
        restricted_inner_radius,
    })
}

/// `(1 / 2 pi i) * contour integral of (zI - A)^{-1}` over `|z| = r`.
fn riesz_inner_projection(a: &DMatrix<f64>, r: f64, nodes: usize) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let ac: DMatrix<Complex64> = a.map(|v| Complex64::new(v, 0.0));
    let mut acc = DMatrix::<Complex64>::zeros(n, n);
    for k in 0..nodes {
        let z = Complex64::from_polar(r, TAU * (k as f64 + 0.5) / nodes as f64);
        let m = DMatrix::<Complex64>::identity(n, n) * z - &ac;
        let inv = m
            .try_inverse()
            .ok_or_else(|| Error::Precondition("eigenvalue on the integration contour".into()))?;
        acc += inv * z;
    }
    Ok(acc.map(|v| v.re / nodes as f64))
}

#[derive(Debug, Clone, PartialEq)]
pub struct NearlyEigenEntry {
    pub p: u64,
    /// `p theta mod 2pi`, in `(0, pi/2)`.
    pub eps: f64,
    /// Cone eigenvector of `A^p + sin(eps) B`, unit 1-norm.
    pub w: Vec<f64>,
    pub lambda: f64,
    /// `lambda w - A^p w`.
    pub z: Vec<f64>,
    pub z_norm1: f64,
    /// `eps ||B||_1`.
    pub z_bound: f64,
    /// `||z - sin(eps) B w||_inf`.
    pub identity_error: f64,
    /// `lambda >= cos(eps) - 1e-9`.
    pub lambda_bound_holds: bool,
    /// `(A^p + sin(eps) B) u - cos(eps) u` lies in the cone.
    pub shifted_u_in_cone: bool,
    pub residual: f64,
    pub method: EigenMethod,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NearlyEigenSequence {
    pub entries: Vec<NearlyEigenEntry>,
    pub theta: f64,
    pub functional: PositiveFunctional,
    pub v_plus: Vec<f64>,
    pub v_minus: Vec<f64>,
    pub b: DMatrix<f64>,
    pub b_norm1: f64,
    /// Fewer approximants than requested were available.
    pub exhausted: bool,
    pub near_rational: bool,
}

/// Builds the nearly-eigenvector sequence for `A (u + iv) = e^{i theta}
/// (u + iv)` with `rho(A) = 1` and `u` outside `-C`.
pub fn nearly_eigenvector_sequence(
    a: &DMatrix<f64>,
    c: &ConvexCone,
    theta: f64,
    u: &[f64],
    v: &[f64],
    k: usize,
) -> Result<NearlyEigenSequence> {
    let n = c.dim();
    if a.nrows() != n || a.ncols() != n || u.len() != n || v.len() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: a.nrows(),
        });
    }
    if k == 0 {
        return Err(Error::Precondition("K must be positive".into()));
    }
    let (s, co) = theta.sin_cos();
    let au = mat_vec(a, u);
    let av = mat_vec(a, v);
    let scale = (norm1(u) + norm1(v)).max(1e-300);
    let eig_err: f64 = (0..n)
        .map(|i| (au[i] - (co * u[i] - s * v[i])).abs() + (av[i] - (s * u[i] + co * v[i])).abs())
        .sum::<f64>()
        / scale;
    if eig_err > 1e-8 {
        return Err(Error::Precondition(format!(
            "u + iv is not an eigenvector for e^(i theta) (error {eig_err:e})"
        )));
    }
    let rho = spectrum::spectral_radius_real(a);
    if (rho - 1.0).abs() > 1e-8 {
        return Err(Error::Precondition(format!(
            "spectral radius {rho} is not 1"
        )));
    }
    let functional = separating_functional(c, u)?;
    let (v_plus, v_minus) = decompose(c, v)?;
    let b = rank_one_b(c, &functional, u, &v_plus)?;
    let b_norm1 = operator_norm1(&b);

    let approx = rotation_approximants(theta, k + 8)?;
    let usable: Vec<(u64, f64)> = approx
        .entries
        .iter()
        .copied()
        .filter(|&(_, e)| e > 0.0 && e < FRAC_PI_2)
        .take(k)
        .collect();
    if usable.is_empty() {
        return Err(Error::Harness {
            reason: format!(
                "no rotation approximant with residue in (0, pi/2) for theta = {theta}"
            ),
            fallback: None,
        });
    }
    let exhausted = usable.len() < k;

    let mut entries = Vec::with_capacity(usable.len());
    for (p, eps) in usable {
        let ap = mat_pow(a, p);
        let sin_eps = eps.sin();
        let t = &ap + &b * sin_eps;
        c.check_preserved(&t)?;
        let pair: ConeEigenpair = cone_eigenvector_from(&t, c, &c.interior_point())?;
        let tscale = operator_norm1(&t).max(1.0);
        if pair.residual > 1e-8 * tscale {
            return Err(Error::Harness {
                reason: format!("cone eigenpair residual {:e} at p = {p}", pair.residual),
                fallback: None,
            });
        }
        let w = pair.vector;
        let lambda = pair.eigenvalue;
        let apw = mat_vec(&ap, &w);
        let z: Vec<f64> = w
            .iter()
            .zip(&apw)
            .map(|(wi, ai)| lambda * wi - ai)
            .collect();
        let bw = mat_vec(&b, &w);
        let identity_error = z
            .iter()
            .zip(&bw)
            .map(|(zi, bi)| (zi - sin_eps * bi).abs())
            .fold(0.0, f64::max);
        let tu = mat_vec(&t, u);
        let shifted: Vec<f64> = tu.iter().zip(u).map(|(x, y)| x - eps.cos() * y).collect();
        entries.push(NearlyEigenEntry {
            p,
            eps,
            z_norm1: norm1(&z),
            z_bound: eps * b_norm1,
            identity_error,
            lambda_bound_holds: lambda >= eps.cos() - 1e-9,
            shifted_u_in_cone: c.contains(&shifted, 1e-9 * norm1(&tu).max(1.0)),
            residual: pair.residual,
            method: pair.method,
            w,
            lambda,
            z,
        });
    }
    Ok(NearlyEigenSequence {
        entries,
        theta,
        functional,
        v_plus,
        v_minus,
        b,
        b_norm1,
        exhausted,
        near_rational: approx.near_rational,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayEntry {
    pub p: u64,
    /// `||P'' w_k||_1`.
    pub norm: f64,
    /// `r'^p ||P''||_1 + DECAY_FLOOR`.
    pub bound: f64,
    pub holds: bool,
    /// `||A^p P''||_1`, which drops below `r'^p` for large `p`.
    pub inner_power_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    pub entries: Vec<DecayEntry>,
    pub r_prime: f64,
    pub p_doubleprime_norm1: f64,
    /// First index from which the bound holds for every later entry.
    pub threshold_index: Option<usize>,
}

impl DecayReport {
    pub fn holds_beyond_threshold(&self) -> bool {
        self.threshold_index.is_some()
    }
}

pub fn peripheral_decay(split: &SpectralSplit, seq: &NearlyEigenSequence) -> DecayReport {
    let pn = operator_norm1(&split.p_doubleprime);
    let entries: Vec<DecayEntry> = seq
        .entries
        .iter()
        .map(|e| {
            let norm = norm1(&mat_vec(&split.p_doubleprime, &e.w));
            let bound = split.r_prime.powf(e.p as f64) * pn + DECAY_FLOOR;
            let inner_power_norm =
                operator_norm1(&(mat_pow(&split.operator, e.p) * &split.p_doubleprime));
            DecayEntry {
                p: e.p,
                norm,
                bound,
                holds: norm <= bound,
                inner_power_norm,
            }
        })
        .collect();
    let threshold_index = match entries.iter().rposition(|e| !e.holds) {
        None if entries.is_empty() => None,
        None => Some(0),
        Some(last_bad) if last_bad + 1 < entries.len() => Some(last_bad + 1),
        Some(_) => None,
    };
    DecayReport {
        entries,
        r_prime: split.r_prime,
        p_doubleprime_norm1: pn,
        threshold_index,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriverOptions {
    /// Number of approximants in the nearly-eigenvector branch.
    pub k: usize,
    pub gap_hint: f64,
}

impl Default for DriverOptions {
    fn default() -> Self {
        DriverOptions {
            k: 4,
            gap_hint: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DriverBranch {
    /// Every peripheral eigenvalue is a root of unity; the eigenvector comes
    /// from a cone eigenvector of `(A / rho)^power`.
    RootsOfUnity { power: u64 },
    /// An irrational peripheral rotation was resolved through the
    /// nearly-eigenvector sequence.
    NearlyEigenvector {
        theta: f64,
        sequence: Box<NearlyEigenSequence>,
        split: Box<SpectralSplit>,
        decay: DecayReport,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositiveEigenpair {
    pub rho: f64,
    /// In the cone, unit 1-norm.
    pub vector: Vec<f64>,
    /// `||A v - rho v||_1`.
    pub residual: f64,
    /// Spectral radius from the dense eigensolver.
    pub oracle_rho: f64,
    pub branch: DriverBranch,
    pub method: EigenMethod,
}

#[derive(Debug, Clone, PartialEq)]
pub enum KreinRutmanOutcome {
    ZeroRadius {
        max_modulus: f64,
        /// `A^n` vanishes up to round-off.
        nilpotent: bool,
    },
    Eigenpair(PositiveEigenpair),
}

/// Smallest `d <= 64` with `angle / 2pi` within `1e-7` of a multiple of
/// `1/d`.
fn root_of_unity_order(z: Complex64) -> Option<u64> {
    let t = (z.arg() / TAU).rem_euclid(1.0);
    (1..=64u64).find(|&d| {
        let x = t * d as f64;
        (x - x.round()).abs() <= 1e-7 * d as f64
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Either certifies spectral radius zero or returns the spectral radius
/// with an eigenvector in the cone.
pub fn positive_eigenvector_compact(
    a: &DMatrix<f64>,
    c: &ConvexCone,
) -> Result<KreinRutmanOutcome> {
    positive_eigenvector_compact_with(a, c, DriverOptions::default())
}

pub fn positive_eigenvector_compact_with(
    a: &DMatrix<f64>,
    c: &ConvexCone,
    opts: DriverOptions,
) -> Result<KreinRutmanOutcome> {
    let n = c.dim();
    c.check_preserved(a)?;
    let eig = spectrum::eigenvalues_real(a);
    let oracle_rho = eig[0].norm();
    if oracle_rho < 1e-12 {
        let an = mat_pow(a, n as u64);
        let nilpotent = operator_norm1(&an) <= 1e-12 * operator_norm1(a).max(1.0).powi(n as i32);
        return Ok(KreinRutmanOutcome::ZeroRadius {
            max_modulus: oracle_rho,
            nilpotent,
        });
    }
    let a1 = a / oracle_rho;
    let peripheral: Vec<Complex64> = eig
        .iter()
        .map(|z| z / oracle_rho)
        .filter(|z| (z.norm() - 1.0).abs() <= PERIPHERAL_TOL)
        .collect();
    let orders: Vec<Option<u64>> = peripheral.iter().map(|&z| root_of_unity_order(z)).collect();

    let fail = |reason: String| Error::Harness {
        reason,
        fallback: oracle_cone_eigenvector(a, c),
    };

    if orders.iter().all(Option::is_some) {
        let q = orders
            .iter()
            .flatten()
            .fold(1u64, |acc, &d| acc / gcd(acc, d) * d);
        let t = mat_pow(&a1, q);
        let pair = cone_eigenvector_from(&t, c, &c.interior_point())?;
        if !(pair.eigenvalue > 0.0) {
            return Err(fail(format!(
                "cone eigenvalue {} of the power is not positive",
                pair.eigenvalue
            )));
        }
        let w = lift_power_eigenvector(|x| mat_vec(&a1, x), &pair.vector, pair.eigenvalue, q);
        let s = norm1(&w);
        let w: Vec<f64> = w.iter().map(|x| x / s).collect();
        return finish(
            a,
            c,
            w,
            oracle_rho,
            DriverBranch::RootsOfUnity { power: q },
            pair.method,
        )
        .map_err(|e| match e {
            Error::Harness { reason, .. } => fail(reason),
            other => other,
        });
    }

    let lambda = peripheral
        .iter()
        .zip(&orders)
        .filter(|(z, o)| o.is_none() && z.im > 0.0)
        .map(|(z, _)| *z)
        .next()
        .ok_or_else(|| fail("no peripheral eigenvalue with positive imaginary part".into()))?;
    let theta = lambda.arg();
    let (u, v) = eigenvector_phase(&a1, lambda, c)
        .ok_or_else(|| fail("no usable peripheral eigenvector".into()))?;
    let sequence = nearly_eigenvector_sequence(&a1, c, theta, &u, &v, opts.k)?;
    let split = spectral_split(&a1, opts.gap_hint)?;
    let decay = peripheral_decay(&split, &sequence);
    let last = &sequence.entries.last().expect("nonempty sequence").w;
    let projected = mat_vec(&split.p_prime, last);
    let seed = if c.contains(&projected, 1e-9) && norm1(&projected) > 1e-12 {
        projected
    } else {
        last.clone()
    };
    let pair = cone_eigenvector_from(&a1, c, &seed)?;
    let branch = DriverBranch::NearlyEigenvector {
        theta,
        sequence: Box::new(sequence),
        split: Box::new(split),
        decay,
    };
    finish(a, c, pair.vector, oracle_rho, branch, pair.method).map_err(|e| match e {
        Error::Harness { reason, .. } => fail(reason),
        other => other,
    })
}

/// Rayleigh-type eigenvalue of the candidate vector and the final checks:
/// cone membership, residual `<= 1e-8 rho`, and agreement with the oracle
/// spectral radius.
fn finish(
    a: &DMatrix<f64>,
    c: &ConvexCone,
    w: Vec<f64>,
    oracle_rho: f64,
    branch: DriverBranch,
    method: EigenMethod,
) -> Result<KreinRutmanOutcome> {
    let phi = c.interior_functional();
    let aw = mat_vec(a, &w);
    let rho = phi.eval(&aw) / phi.eval(&w);
    let residual: f64 = aw.iter().zip(&w).map(|(x, y)| (x - rho * y).abs()).sum();
    if !c.contains(&w, 1e-9) {
        return Err(Error::Harness {
            reason: "eigenvector left the cone".into(),
            fallback: None,
        });
    }
    if residual > 1e-8 * oracle_rho {
        return Err(Error::Harness {
            reason: format!("residual {residual:e} exceeds 1e-8 rho"),
            fallback: None,
        });
    }
    if (rho - oracle_rho).abs() > 1e-8 * oracle_rho.max(1.0) {
        return Err(Error::Harness {
            reason: format!("eigenvalue {rho} differs from the spectral radius {oracle_rho}"),
            fallback: None,
        });
    }
    Ok(KreinRutmanOutcome::Eigenpair(PositiveEigenpair {
        rho,
        vector: w,
        residual,
        oracle_rho,
        branch,
        method,
    }))
}

/// Real and imaginary parts of an eigenvector for `lambda`, rotated by a
/// phase so that the real part lies outside `-C`, scaled to `||u||_1 = 1`.
fn eigenvector_phase(
    a: &DMatrix<f64>,
    lambda: Complex64,
    c: &ConvexCone,
) -> Option<(Vec<f64>, Vec<f64>)> {
    let ac = a.map(|v| Complex64::new(v, 0.0));
    let x = spectrum::eigenvector_complex(&ac, lambda)?;
    let phi = c.interior_functional();
    let g: Complex64 = phi.coefficients.iter().zip(&x).map(|(f, xi)| xi * *f).sum();
    let xnorm: f64 = x.iter().map(|z| z.norm()).sum();
    let phases: Vec<Complex64> = if g.norm() > 1e-8 * xnorm {
        vec![g.conj() / g.norm()]
    } else {
        (0..16)
            .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / 16.0))
            .collect()
    };
    phases
        .into_iter()
        .map(|ph| {
            let y: Vec<Complex64> = x.iter().map(|z| z * ph).collect();
            let u: Vec<f64> = y.iter().map(|z| z.re).collect();
            let v: Vec<f64> = y.iter().map(|z| z.im).collect();
            (u, v)
        })
        .filter(|(u, _)| {
            let neg: Vec<f64> = u.iter().map(|x| -x).collect();
            norm1(u) > 1e-8 && !c.contains(&neg, 1e-9 * norm1(u))
        })
        .max_by(|p, q| norm1(&p.0).total_cmp(&norm1(&q.0)))
        .map(|(u, v)| {
            let s = norm1(&u);
            (
                u.iter().map(|x| x / s).collect(),
                v.iter().map(|x| x / s).collect(),
            )
        })
}

/// Built-in test operators and their cones.
pub mod scenarios {
    use super::*;

    /// Rotation by `theta` about the axis of the 3-dimensional Lorentz cone
    /// with axis index 2.
    pub fn lorentz_rotation(theta: f64) -> (DMatrix<f64>, ConvexCone) {
        let (s, c) = theta.sin_cos();
        let a = DMatrix::from_row_slice(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0]);
        (a, ConvexCone::lorentz(3, 2).expect("valid cone"))
    }

    /// Rotation by `theta` in the first two coordinates, contraction by 1/2
    /// in the third, identity on the axis (index 3) of the 4-dimensional
    /// Lorentz cone. Spectrum `{e^{+-i theta}, 1/2, 1}`.
    pub fn lorentz_split(theta: f64) -> (DMatrix<f64>, ConvexCone) {
        let (s, c) = theta.sin_cos();
        #[rustfmt::skip]
        let a = DMatrix::from_row_slice(4, 4, &[
            c, -s, 0.0, 0.0,
            s, c, 0.0, 0.0,
            0.0, 0.0, 0.5, 0.0,
            0.0, 0.0, 0.0, 1.0,
        ]);
        (a, ConvexCone::lorentz(4, 3).expect("valid cone"))
    }

    /// The 2-cycle on the nonnegative quadrant.
    pub fn orthant_cycle() -> (DMatrix<f64>, ConvexCone) {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        (a, ConvexCone::orthant(2).expect("valid cone"))
    }

    /// Strictly upper triangular 3x3 shift on the nonnegative octant.
    pub fn nilpotent() -> (DMatrix<f64>, ConvexCone) {
        let a = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        (a, ConvexCone::orthant(3).expect("valid cone"))
    }

    /// Peripheral eigenvector `u + iv` of [`lorentz_rotation`] and
    /// [`lorentz_split`] for `e^{i theta}`: `u = e_0`, `v = -e_1`.
    pub fn rotation_eigenvector(n: usize) -> (Vec<f64>, Vec<f64>) {
        let mut u = vec![0.0; n];
        let mut v = vec![0.0; n];
        u[0] = 1.0;
        v[1] = -1.0;
        (u, v)
    }
}

#[cfg(test)]
mod tests {
    use super::scenarios::*;
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn split_examples() {
        let (s, co) = 1f64.sin_cos();
        let a = DMatrix::from_row_slice(3, 3, &[co, -s, 0.0, s, co, 0.0, 0.0, 0.0, 0.5]);
        let sp = spectral_split(&a, 1e-6).unwrap();
        assert_eq!(sp.peripheral_dim, 2);
        assert!(close(sp.r_prime, 0.75, 1e-12));
        let expect = DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        assert!(operator_norm1(&(&sp.p_doubleprime - expect)) < 1e-10);
        assert!(sp.idempotence_error < 1e-10 && sp.commutation_error < 1e-10);
        assert!(sp.restricted_inner_radius <= sp.r_prime);
        assert!(sp
            .restricted_peripheral_moduli
            .iter()
            .all(|m| close(*m, 1.0, 1e-8)));

        let sp = spectral_split(&DMatrix::identity(3, 3), 1e-6).unwrap();
        assert_eq!(sp.peripheral_dim, 3);
        assert!(sp.p_doubleprime.iter().all(|v| *v == 0.0));

        let (rot, _) = lorentz_rotation(1.0);
        assert_eq!(spectral_split(&rot, 1e-6).unwrap().peripheral_dim, 3);
    }

    #[test]
    fn split_errors() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.9]);
        assert!(matches!(
            spectral_split(&a, 0.2),
            Err(Error::NoSpectralGap { .. })
        ));
        assert!(spectral_split(&a, 0.05).is_ok());
        let b = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5]);
        assert!(matches!(
            spectral_split(&b, 0.1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn split_non_normal() {
        // Non-normal inner part; the projection must still be exact.
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 3.0, 0.0, 0.0, 0.5, 2.0, 0.0, 0.0, 0.2]);
        let sp = spectral_split(&a, 1e-3).unwrap();
        assert_eq!(sp.peripheral_dim, 1);
        assert!(sp.idempotence_error < 1e-10 && sp.commutation_error < 1e-10);
        // P' maps onto the eigenvector e_0.
        assert!(sp
            .p_prime
            .row(1)
            .iter()
            .chain(sp.p_prime.row(2).iter())
            .all(|v| v.abs() < 1e-10));
    }

    #[test]
    fn sequence_lorentz_rotation() {
        let (a, c) = lorentz_rotation(1.0);
        let (u, v) = rotation_eigenvector(3);
        let seq = nearly_eigenvector_sequence(&a, &c, 1.0, &u, &v, 4).unwrap();
        assert_eq!(seq.v_plus, vec![0.0, -1.0, 1.0]);
        let ps: Vec<u64> = seq.entries.iter().map(|e| e.p).collect();
        assert_eq!(ps, vec![1, 19, 44, 710]);
        for e in &seq.entries {
            assert!(e.lambda_bound_holds, "{e:?}");
            assert!(e.identity_error <= 1e-8);
            assert!(e.z_norm1 <= e.z_bound * (1.0 + 1e-9));
            assert!(e.shifted_u_in_cone);
            assert!(c.contains(&e.w, 1e-9) && close(norm1(&e.w), 1.0, 1e-12));
        }
        assert!(seq.entries[2].lambda >= (0.0177f64).cos() - 1e-9);
    }

    #[test]
    fn sequence_preconditions() {
        let (a, c) = lorentz_rotation(1.0);
        let (u, v) = rotation_eigenvector(3);
        let neg_u: Vec<f64> = u.iter().map(|x| -x).collect();
        let neg_v: Vec<f64> = v.iter().map(|x| -x).collect();
        // -(u + iv) is also an eigenvector; -u is still outside -C here.
        assert!(nearly_eigenvector_sequence(&a, &c, 1.0, &neg_u, &neg_v, 2).is_ok());
        assert!(matches!(
            nearly_eigenvector_sequence(&a, &c, 1.0, &u, &u, 2),
            Err(Error::Precondition(_))
        ));
        let (u0, v0) = (vec![0.0, 0.0, -1.0], vec![0.0; 3]);
        assert!(
            nearly_eigenvector_sequence(&DMatrix::identity(3, 3), &c, 0.0, &u0, &v0, 1).is_err()
        );
    }

    #[test]
    fn decay_on_split_operator() {
        let (a, c) = lorentz_split(1.0);
        let (u, v) = rotation_eigenvector(4);
        let seq = nearly_eigenvector_sequence(&a, &c, 1.0, &u, &v, 4).unwrap();
        let split = spectral_split(&a, 1e-6).unwrap();
        assert_eq!(split.peripheral_dim, 3);
        assert!(close(split.r_prime, 0.75, 1e-12));
        let report = peripheral_decay(&split, &seq);
        assert_eq!(report.entries.len(), 4);
        assert!(report.holds_beyond_threshold());
        assert!(report.entries.iter().all(|e| e.holds));

        let (rot, _) = lorentz_rotation(1.0);
        let (u, v) = rotation_eigenvector(3);
        let seq =
            nearly_eigenvector_sequence(&rot, &ConvexCone::lorentz(3, 2).unwrap(), 1.0, &u, &v, 1)
                .unwrap();
        let report = peripheral_decay(&spectral_split(&rot, 1e-6).unwrap(), &seq);
        assert_eq!(report.entries.len(), 1);
        assert_eq!(report.entries[0].norm, 0.0);
    }

    #[test]
    fn driver_examples() {
        let (a, c) = nilpotent();
        assert!(matches!(
            positive_eigenvector_compact(&a, &c).unwrap(),
            KreinRutmanOutcome::ZeroRadius {
                nilpotent: true,
                ..
            }
        ));

        let (a, c) = lorentz_rotation(1.0);
        let KreinRutmanOutcome::Eigenpair(pair) = positive_eigenvector_compact(&a, &c).unwrap()
        else {
            panic!("expected eigenpair");
        };
        assert!(close(pair.rho, 1.0, 1e-9));
        assert!(pair.vector[0].abs() < 1e-7 && pair.vector[1].abs() < 1e-7);
        assert!(matches!(
            pair.branch,
            DriverBranch::NearlyEigenvector { .. }
        ));

        let (a, c) = orthant_cycle();
        let KreinRutmanOutcome::Eigenpair(pair) = positive_eigenvector_compact(&a, &c).unwrap()
        else {
            panic!("expected eigenpair");
        };
        assert!(close(pair.rho, 1.0, 1e-12));
        assert!(close(pair.vector[0], 0.5, 1e-12) && close(pair.vector[1], 0.5, 1e-12));
        assert_eq!(pair.branch, DriverBranch::RootsOfUnity { power: 2 });
    }

    #[test]
    fn driver_scales_and_rejects() {
        let (a, c) = lorentz_split(1.0);
        let a3 = &a * 3.0;
        let KreinRutmanOutcome::Eigenpair(pair) = positive_eigenvector_compact(&a3, &c).unwrap()
        else {
            panic!("expected eigenpair");
        };
        assert!(close(pair.rho, 3.0, 3e-8));
        assert!(close(pair.vector[3], 1.0, 1e-7));

        let o = ConvexCone::orthant(2).unwrap();
        let neg = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        assert!(matches!(
            positive_eigenvector_compact(&neg, &o),
            Err(Error::ConeNotPreserved(_))
        ));
    }

    #[test]
    fn driver_reducible_orthant() {
        // diag(1, 0): the power iteration must not settle on the annihilated
        // direction.
        let o = ConvexCone::orthant(2).unwrap();
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let KreinRutmanOutcome::Eigenpair(pair) = positive_eigenvector_compact(&a, &o).unwrap()
        else {
            panic!("expected eigenpair");
        };
        assert!(close(pair.rho, 1.0, 1e-9));
        assert!(close(pair.vector[0], 1.0, 1e-9));
    }
}
