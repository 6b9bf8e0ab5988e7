//! Integral operators with nonnegative kernels on `[0, 1]`, discretized by
//! Nyström quadrature.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::matrix::NonnegativeMatrix;
use crate::perron::perron_irreducible;
use crate::spectrum;
use crate::structure;

type Evaluator = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A kernel `k(s, t)` on the unit square.
#[derive(Clone)]
pub struct Kernel {
    evaluator: Evaluator,
    pub strictly_positive_claimed: bool,
    pub description: String,
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Kernel")
            .field("description", &self.description)
            .field("strictly_positive_claimed", &self.strictly_positive_claimed)
            .finish()
    }
}

impl Kernel {
    pub fn from_fn(
        description: impl Into<String>,
        strictly_positive_claimed: bool,
        f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Kernel {
            evaluator: Arc::new(f),
            strictly_positive_claimed,
            description: description.into(),
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::from_fn(format!("const:{c}"), c > 0.0, move |_, _| c)
    }

    /// `sum_k c_k (s t)^k`.
    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        let desc = format!(
            "poly:{}",
            coeffs
                .iter()
                .map(f64::to_string)
                .collect::<Vec<_>>()
                .join(",")
        );
        let positive = coeffs.first().is_some_and(|&c| c > 0.0) && coeffs.iter().all(|&c| c >= 0.0);
        Self::from_fn(desc, positive, move |s, t| {
            let x = s * t;
            coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
        })
    }

    /// `exp(a s t)`.
    pub fn exponential(a: f64) -> Self {
        Self::from_fn(format!("exp:{a}"), true, move |s, t| (a * s * t).exp())
    }

    /// Parses `const:C`, `poly:C0,C1,...` or `exp[:A]`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
        let nums = || -> Result<Vec<f64>> {
            args.split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| {
                            Error::InvalidKernel(format!("bad number {s:?} in {spec:?}"))
                        })
                })
                .collect()
        };
        match name.trim() {
            "const" => match nums()?.as_slice() {
                [c] => Ok(Self::constant(*c)),
                _ => Err(Error::InvalidKernel(format!(
                    "const takes one value: {spec:?}"
                ))),
            },
            "poly" => {
                let c = nums()?;
                if c.is_empty() {
                    return Err(Error::InvalidKernel(format!(
                        "poly needs coefficients: {spec:?}"
                    )));
                }
                Ok(Self::polynomial(c))
            }
            "exp" => match nums()?.as_slice() {
                [] => Ok(Self::exponential(1.0)),
                [a] => Ok(Self::exponential(*a)),
                _ => Err(Error::InvalidKernel(format!(
                    "exp takes at most one value: {spec:?}"
                ))),
            },
            other => Err(Error::InvalidKernel(format!("unknown kernel {other:?}"))),
        }
    }

    pub fn eval(&self, s: f64, t: f64) -> f64 {
        (self.evaluator)(s, t)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(Error::InvalidQuadrature(
                "nodes and weights must be nonempty and equally long".into(),
            ));
        }
        if nodes.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::InvalidQuadrature("nodes must lie in [0, 1]".into()));
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidQuadrature(
                "nodes must be strictly increasing".into(),
            ));
        }
        if weights.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidQuadrature("weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidQuadrature(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(QuadratureRule { nodes, weights })
    }

    /// `n`-point Gauss–Legendre rule mapped to `[0, 1]`, with weights
    /// rescaled to sum to exactly one.
    pub fn gauss_legendre(n: usize) -> Result<Self> {
        if n == 0 || n > crate::matrix::MAX_DIM {
            return Err(Error::InvalidQuadrature(format!(
                "node count {n} out of range"
            )));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Root i of P_n on [-1, 1], descending from near 1.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            // x > 0 for the upper half; map [-1, 1] to [0, 1].
            nodes[n - 1 - i] = 0.5 * (1.0 + x);
            nodes[i] = 0.5 * (1.0 - x);
            weights[n - 1 - i] = 0.5 * w;
            weights[i] = 0.5 * w;
        }
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        Self::new(nodes, weights)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

/// Nyström matrix with entries `k(s_i, s_j) w_j`.
pub fn discretize(kernel: &Kernel, rule: &QuadratureRule) -> Result<NonnegativeMatrix> {
    let n = rule.len();
    let mut entries = Vec::with_capacity(n * n);
    for &s in rule.nodes() {
        for (&t, &w) in rule.nodes().iter().zip(rule.weights()) {
            let value = kernel.eval(s, t);
            if !(value >= 0.0) {
                return Err(Error::NegativeKernel { s, t, value });
            }
            entries.push(value * w);
        }
    }
    NonnegativeMatrix::new(n, entries)
}

#[derive(Debug, Clone, PartialEq)]
pub struct JentzschReport {
    pub rho: f64,
    /// Eigenfunction values at the nodes, scaled to unit quadrature integral.
    pub eigenfunction: Vec<f64>,
    pub min_eigenfunction: f64,
    /// `|lambda_2| / rho` from the dense eigensolver.
    pub gap_ratio: f64,
    pub simple: bool,
    pub residual: f64,
}

pub fn jentzsch_analyze(kernel: &Kernel, rule: &QuadratureRule) -> Result<JentzschReport> {
    for &s in rule.nodes() {
        for &t in rule.nodes() {
            let value = kernel.eval(s, t);
            if !(value > 0.0) {
                return Err(Error::KernelNotPositive { s, t, value });
            }
        }
    }
    let a = discretize(kernel, rule)?;
    // Nyström matrices are small and well conditioned; ask for a residual
    // near round-off so that rho is accurate to about 1e-13.
    let cert = perron_irreducible(&a, 1e-13 * a.norm1().max(1.0))?;
    let v = cert.vector.coords();
    let integral: f64 = v.iter().zip(rule.weights()).map(|(x, w)| x * w).sum();
    let eigenfunction: Vec<f64> = v.iter().map(|x| x / integral).collect();
    let min_eigenfunction = eigenfunction.iter().copied().fold(f64::INFINITY, f64::min);
    let spectrum = spectrum::eigenvalues_real(&a.to_dmatrix());
    let gap_ratio = spectrum.get(1).map_or(0.0, |z| z.norm() / cert.rho);
    Ok(JentzschReport {
        rho: cert.rho,
        eigenfunction,
        min_eigenfunction,
        gap_ratio,
        simple: cert.simplicity.as_ref().is_some_and(|s| s.simple),
        residual: cert.residual,
    })
}

/// Discrete Schaefer condition: every nontrivial index split `S` carries
/// positive mass in the block `(complement of S) x S`. Returns a split with
/// zero mass when the condition fails.
///
/// A zero block `(X - S) x S` means no support edge enters `S` from outside,
/// so the complement of `S` is closed under outgoing edges. Such sets exist
/// exactly when the support digraph is not strongly connected.
pub fn schaefer_check(a: &NonnegativeMatrix) -> (bool, Option<Vec<usize>>) {
    let report = structure::is_irreducible(a);
    if report.irreducible {
        return (true, None);
    }
    let closed = report.witness;
    let split = (0..a.dim()).filter(|i| !closed.contains(i)).collect();
    (false, Some(split))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefinementStudy {
    /// `(node count, rho)` per level.
    pub levels: Vec<(usize, f64)>,
    /// `|rho_{k+1} - rho_k|`.
    pub differences: Vec<f64>,
    /// Differences are non-increasing up to a round-off allowance of
    /// `64 eps rho`.
    pub monotone: bool,
}

pub fn refine_study(kernel: &Kernel, sizes: &[usize]) -> Result<RefinementStudy> {
    if sizes.is_empty() || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition(
            "sizes must be nonempty and increasing".into(),
        ));
    }
    let mut levels = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let rule = QuadratureRule::gauss_legendre(n)?;
        levels.push((n, jentzsch_analyze(kernel, &rule)?.rho));
    }
    let differences: Vec<f64> = levels.windows(2).map(|w| (w[1].1 - w[0].1).abs()).collect();
    let scale = levels.iter().fold(1.0_f64, |m, l| m.max(l.1.abs()));
    let allowance = 64.0 * f64::EPSILON * scale;
    let monotone = differences.windows(2).all(|d| d[1] <= d[0] + allowance);
    Ok(RefinementStudy {
        levels,
        differences,
        monotone,
    })
}
