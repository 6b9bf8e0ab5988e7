//! JSON report types. Field order is declaration order, so identical inputs
//! give identical bytes (unless timing is requested).

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;

use pfc_core::num_complex::Complex64;

pub const SCHEMA: &str = "pfc-report/1";

/// A double written with 17 significant digits; NaN and infinities become
/// `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

pub fn format_f64(x: f64) -> Option<String> {
    x.is_finite().then(|| format!("{x:.16e}"))
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match format_f64(self.0) {
            Some(text) => {
                let raw = RawValue::from_string(text).map_err(serde::ser::Error::custom)?;
                raw.serialize(s)
            }
            None => s.serialize_none(),
        }
    }
}

/// `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cplx(pub Complex64);

impl Serialize for Cplx {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        seq.serialize_element(&Num(self.0.re))?;
        seq.serialize_element(&Num(self.0.im))?;
        seq.end()
    }
}

pub fn nums(v: &[f64]) -> Vec<Num> {
    v.iter().copied().map(Num).collect()
}

pub fn cplxs(v: &[Complex64]) -> Vec<Cplx> {
    v.iter().copied().map(Cplx).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub request: RequestEcho,
    pub results: Results,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Vec<Stage>>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RequestEcho {
    pub subcommand: &'static str,
    pub input: Option<String>,
    pub tol: Num,
    pub max_iter: usize,
    pub nodes: usize,
    pub kernel: Option<String>,
    pub theta: Num,
    #[serde(rename = "K")]
    pub k: usize,
    pub format: Option<&'static str>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Stage {
    pub stage: &'static str,
    pub seconds: Num,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Results {
    Analyze(Box<AnalyzeResults>),
    AnalyzeComplex(Box<ComplexResults>),
    Perron(Box<PerronResults>),
    Jentzsch(Box<JentzschResults>),
    Harness(Box<HarnessResults>),
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeResults {
    pub dim: usize,
    pub irreducible: bool,
    pub method_agreement: bool,
    pub support_growth: Vec<usize>,
    /// Index set with no edge leaving it, for reducible input.
    pub closed_set: Option<Vec<usize>>,
    pub nilpotent: bool,
    pub primitive: bool,
    pub primitivity_exponent: Option<usize>,
    pub period: Option<usize>,
    pub cyclic_classes: Option<Vec<Vec<usize>>>,
    pub cyclic_permutation: Option<Vec<usize>>,
    pub block_permutation: Option<Vec<usize>>,
    pub block_sizes: Option<Vec<usize>>,
    pub spectral_radius: Num,
    pub eigenvalues: Vec<Cplx>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComplexResults {
    pub dim: usize,
    pub spectral_radius: Num,
    pub modulus_spectral_radius: Num,
    /// `strict`, `equal_radius` or `not_dominated` against the entrywise
    /// modulus matrix.
    pub dominance: &'static str,
    pub modulus_irreducible: bool,
    pub eigenvalues: Vec<Cplx>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PerronResults {
    pub dim: usize,
    /// `irreducible` or `fixed_point`.
    pub method: &'static str,
    pub irreducible: bool,
    pub period: Option<usize>,
    pub rho: Num,
    pub vector: Vec<Num>,
    pub cw_lower: Num,
    pub cw_upper: Num,
    pub residual: Num,
    pub iterations: usize,
    pub converged: bool,
    pub strictly_positive: bool,
    pub nilpotent: bool,
    pub simple: Option<bool>,
    pub char_poly_derivative: Option<Num>,
    pub char_poly_derivative_fd: Option<Num>,
}

#[derive(Debug, Clone, Serialize)]
pub struct JentzschResults {
    pub kernel: String,
    pub nodes: Vec<Num>,
    pub weights: Vec<Num>,
    pub rho: Num,
    pub eigenfunction: Vec<Num>,
    pub min_eigenfunction: Num,
    pub gap_ratio: Num,
    pub simple: bool,
    pub residual: Num,
    pub positivity_condition: bool,
    pub refinement: Vec<RefinementLevel>,
    pub refinement_monotone: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RefinementLevel {
    pub nodes: usize,
    pub rho: Num,
}

#[derive(Debug, Clone, Serialize)]
pub struct HarnessResults {
    pub scenario: String,
    pub dim: usize,
    pub driver: DriverResults,
    pub sequence: Option<SequenceResults>,
    pub split: Option<SplitResults>,
    pub decay: Option<DecayResults>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DriverResults {
    /// `zero_radius` or `eigenpair`.
    pub outcome: &'static str,
    pub rho: Num,
    pub vector: Option<Vec<Num>>,
    pub residual: Option<Num>,
    pub oracle_rho: Num,
    /// `roots_of_unity` or `nearly_eigenvector`.
    pub branch: Option<&'static str>,
    pub power: Option<u64>,
    pub theta: Option<Num>,
    pub eigen_method: Option<&'static str>,
    pub nilpotent: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SequenceResults {
    pub theta: Num,
    pub functional: Vec<Num>,
    pub v_plus: Vec<Num>,
    pub v_minus: Vec<Num>,
    pub b_norm1: Num,
    pub exhausted: bool,
    pub near_rational: bool,
    pub entries: Vec<SequenceEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SequenceEntry {
    pub p: u64,
    pub eps: Num,
    pub lambda: Num,
    pub w: Vec<Num>,
    pub z_norm1: Num,
    pub z_bound: Num,
    pub identity_error: Num,
    pub lambda_bound_holds: bool,
    pub shifted_u_in_cone: bool,
    pub residual: Num,
    pub method: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitResults {
    pub peripheral_dim: usize,
    pub peripheral: Vec<Cplx>,
    pub inner_radius: Num,
    pub r_prime: Num,
    pub contour_nodes: usize,
    pub idempotence_error: Num,
    pub commutation_error: Num,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayResults {
    pub r_prime: Num,
    pub inner_projection_norm1: Num,
    pub threshold_index: Option<usize>,
    pub entries: Vec<DecayEntryResults>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayEntryResults {
    pub p: u64,
    pub norm: Num,
    pub bound: Num,
    pub holds: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_and_null() {
        assert_eq!(
            serde_json::to_string(&Num(1.0)).unwrap(),
            "1.0000000000000000e0"
        );
        assert_eq!(serde_json::to_string(&Num(f64::NAN)).unwrap(), "null");
        assert_eq!(
            serde_json::to_string(&Num(f64::NEG_INFINITY)).unwrap(),
            "null"
        );
        let x = 0.1 + 0.2;
        let text = serde_json::to_string(&Num(x)).unwrap();
        assert_eq!(text.parse::<f64>().unwrap().to_bits(), x.to_bits());
    }

    #[test]
    fn complex_pair() {
        let s = serde_json::to_string(&Cplx(Complex64::new(-2.5, 0.0))).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v, serde_json::json!([-2.5, 0.0]));
    }
}
