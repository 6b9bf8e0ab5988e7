//! Front end for `pfc-core`: reads matrices and kernel descriptions, runs one
//! analysis and assembles a JSON report.
//!
//! Exit codes: 0 on success, 2 for bad input, 3 when an iteration fails to
//! converge.

pub mod input;
pub mod report;

use std::path::PathBuf;
use std::time::Instant;

use pfc_core::jentzsch::{jentzsch_analyze, refine_study, schaefer_check};
use pfc_core::krein_rutman::{
    nearly_eigenvector_sequence, peripheral_decay, positive_eigenvector_compact_with, scenarios,
    spectral_split, DecayReport, DriverBranch, DriverOptions,
};
use pfc_core::matrix::entrywise_abs;
use pfc_core::nalgebra::DMatrix;
use pfc_core::perron::{
    dominance_compare, perron_fixed_point, perron_irreducible_with, simplicity_check, Dominance,
};
use pfc_core::{
    spectrum, structure, ConvexCone, EigenMethod, Kernel, KreinRutmanOutcome, NearlyEigenSequence,
    NonnegativeMatrix, PerronCertificate, PerronOptions, QuadratureRule, SpectralSplit,
};

pub use input::{parse_matrix, parse_matrix_str, InputFormat, ParsedMatrix};
pub use report::{Num, Report, Results};

use report::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    /// The report, when present, carries the best iterate reached.
    #[error("{message}")]
    Convergence {
        message: String,
        report: Option<Box<Report>>,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Convergence { .. } => EXIT_CONVERGENCE,
        }
    }
}

impl From<pfc_core::Error> for CliError {
    fn from(e: pfc_core::Error) -> Self {
        if e.is_convergence_failure() {
            CliError::Convergence {
                message: e.to_string(),
                report: None,
            }
        } else {
            CliError::Input(e.to_string())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Analyze,
    Perron,
    Jentzsch,
    KrHarness,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Analyze => "analyze",
            Subcommand::Perron => "perron",
            Subcommand::Jentzsch => "jentzsch",
            Subcommand::KrHarness => "kr-harness",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub tol: f64,
    pub max_iter: usize,
    /// Quadrature size for `jentzsch`, in `2..=512`.
    pub nodes: usize,
    pub kernel: Option<String>,
    pub theta: f64,
    pub k: usize,
    pub format: Option<InputFormat>,
    /// Adds per-stage wall-clock times; the report is then no longer
    /// byte-reproducible.
    pub timing: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            tol: pfc_core::perron::DEFAULT_TOL,
            max_iter: pfc_core::perron::DEFAULT_MAX_ITER,
            nodes: 32,
            kernel: None,
            theta: 1.0,
            k: 4,
            format: None,
            timing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Request {
    pub subcommand: Subcommand,
    /// Matrix file for `analyze`/`perron`, scenario name for `kr-harness`.
    pub input: Option<String>,
    pub options: Options,
}

pub const SCENARIOS: [&str; 4] = [
    "lorentz-rotation",
    "lorentz-split",
    "orthant-cycle",
    "nilpotent",
];

impl Request {
    pub fn validate(&self) -> Result<(), CliError> {
        let o = &self.options;
        if !(o.tol > 0.0 && o.tol.is_finite()) {
            return Err(CliError::Input(format!(
                "--tol must be positive, got {}",
                o.tol
            )));
        }
        if o.max_iter == 0 {
            return Err(CliError::Input("--max-iter must be at least 1".into()));
        }
        if !(2..=512).contains(&o.nodes) {
            return Err(CliError::Input(format!(
                "--nodes must lie in 2..=512, got {}",
                o.nodes
            )));
        }
        if !o.theta.is_finite() {
            return Err(CliError::Input("--theta must be finite".into()));
        }
        if o.k == 0 {
            return Err(CliError::Input("--K must be at least 1".into()));
        }
        match self.subcommand {
            Subcommand::Analyze | Subcommand::Perron if self.input.is_none() => Err(
                CliError::Input(format!("{} needs a matrix file", self.subcommand.name())),
            ),
            Subcommand::Jentzsch if o.kernel.is_none() => Err(CliError::Input(
                "jentzsch needs --kernel, e.g. poly:1,1".into(),
            )),
            Subcommand::KrHarness => match self.input.as_deref() {
                Some(s) if SCENARIOS.contains(&s) => Ok(()),
                other => Err(CliError::Input(format!(
                    "kr-harness needs a scenario name ({}), got {other:?}",
                    SCENARIOS.join(", ")
                ))),
            },
            _ => Ok(()),
        }
    }

    fn echo(&self) -> RequestEcho {
        let o = &self.options;
        RequestEcho {
            subcommand: self.subcommand.name(),
            input: self.input.clone(),
            tol: Num(o.tol),
            max_iter: o.max_iter,
            nodes: o.nodes,
            kernel: o.kernel.clone(),
            theta: Num(o.theta),
            k: o.k,
            format: o.format.map(|f| match f {
                InputFormat::MatrixMarket => "mm",
                InputFormat::Csv => "csv",
            }),
        }
    }
}

struct Clock {
    enabled: bool,
    last: Instant,
    stages: Vec<Stage>,
}

impl Clock {
    fn new(enabled: bool) -> Self {
        Clock {
            enabled,
            last: Instant::now(),
            stages: Vec::new(),
        }
    }

    fn lap(&mut self, stage: &'static str) {
        let now = Instant::now();
        self.stages.push(Stage {
            stage,
            seconds: Num((now - self.last).as_secs_f64()),
        });
        self.last = now;
    }

    fn finish(self) -> Option<Vec<Stage>> {
        self.enabled.then_some(self.stages)
    }
}

/// Runs the request. A convergence failure may still carry a report.
pub fn run(req: &Request) -> Result<Report, CliError> {
    req.validate()?;
    let mut clock = Clock::new(req.options.timing);
    let mut warnings = Vec::new();
    let outcome = match req.subcommand {
        Subcommand::Analyze => {
            let parsed = read_input(req)?;
            clock.lap("parse");
            analyze(parsed, &mut warnings)
        }
        Subcommand::Perron => {
            let a = read_input(req)?.into_nonnegative()?;
            clock.lap("parse");
            perron(&a, &req.options, &mut warnings)
        }
        Subcommand::Jentzsch => jentzsch(&req.options, &mut warnings),
        Subcommand::KrHarness => harness(
            req.input.as_deref().unwrap_or_default(),
            &req.options,
            &mut warnings,
        ),
    };
    clock.lap("analysis");
    let build = |results: Results, warnings: Vec<String>, timing: Option<Vec<Stage>>| Report {
        schema: SCHEMA,
        request: req.echo(),
        results,
        warnings,
        timing,
    };
    match outcome {
        Ok(results) => Ok(build(results, warnings, clock.finish())),
        Err(Failure::Partial(results, message)) => {
            warnings.push(message.clone());
            Err(CliError::Convergence {
                message,
                report: Some(Box::new(build(results, warnings, clock.finish()))),
            })
        }
        Err(Failure::Plain(e)) => Err(e),
    }
}

enum Failure {
    Plain(CliError),
    Partial(Results, String),
}

impl<E: Into<CliError>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Plain(e.into())
    }
}

fn read_input(req: &Request) -> Result<ParsedMatrix, CliError> {
    let path = PathBuf::from(req.input.as_deref().unwrap_or_default());
    parse_matrix(&path, req.options.format)
}

fn analyze(parsed: ParsedMatrix, warnings: &mut Vec<String>) -> Result<Results, Failure> {
    if let ParsedMatrix::Complex { .. } = parsed {
        let b = parsed.into_complex()?;
        let m = entrywise_abs(&b);
        let modulus_irreducible = structure::is_irreducible(&m).irreducible;
        if !modulus_irreducible {
            warnings.push("modulus matrix is reducible; equality case is not characterized".into());
        }
        let d = dominance_compare(&b, &m)?;
        return Ok(Results::AnalyzeComplex(Box::new(ComplexResults {
            dim: b.dim(),
            spectral_radius: Num(spectrum::spectral_radius_complex(&b)),
            modulus_spectral_radius: Num(d.rho_m),
            dominance: match d.verdict {
                Dominance::DominatedStrict => "strict",
                Dominance::DominatedEqRadius => "equal_radius",
                Dominance::NotDominated => "not_dominated",
            },
            modulus_irreducible,
            eigenvalues: cplxs(&spectrum::eigenvalues_complex(&b.to_dmatrix())),
        })));
    }
    let a = parsed.into_nonnegative()?;
    let irr = structure::is_irreducible(&a);
    let prim = structure::is_primitive(&a);
    let (period, classes, cyc_perm) = if irr.irreducible {
        let c = structure::cyclic_normal_form(&a)?;
        (Some(c.period), Some(c.classes), Some(c.permutation))
    } else {
        (None, None, None)
    };
    let (block_perm, block_sizes) = if irr.irreducible {
        (None, None)
    } else {
        let b = structure::reducible_block_form(&a)?;
        (Some(b.permutation), Some(b.block_sizes))
    };
    if !irr.method_agreement {
        warnings.push("graph and boolean-power irreducibility tests disagree".into());
    }
    Ok(Results::Analyze(Box::new(AnalyzeResults {
        dim: a.dim(),
        irreducible: irr.irreducible,
        method_agreement: irr.method_agreement,
        support_growth: irr.support_growth,
        closed_set: (!irr.irreducible).then_some(irr.witness),
        nilpotent: structure::is_nilpotent(&a),
        primitive: prim.primitive,
        primitivity_exponent: prim.exponent,
        period,
        cyclic_classes: classes,
        cyclic_permutation: cyc_perm,
        block_permutation: block_perm,
        block_sizes,
        spectral_radius: Num(spectrum::spectral_radius(&a)),
        eigenvalues: cplxs(&spectrum::eigenvalues_real(&a.to_dmatrix())),
    })))
}

fn perron_results(
    a: &NonnegativeMatrix,
    cert: &PerronCertificate,
    irreducible: bool,
    period: Option<usize>,
) -> Results {
    let simplicity = cert
        .simplicity
        .clone()
        .or_else(|| simplicity_check(a, cert.rho).ok());
    Results::Perron(Box::new(PerronResults {
        dim: a.dim(),
        method: if irreducible {
            "irreducible"
        } else {
            "fixed_point"
        },
        irreducible,
        period,
        rho: Num(cert.rho),
        vector: nums(cert.vector.coords()),
        cw_lower: Num(cert.cw_lower),
        cw_upper: Num(cert.cw_upper),
        residual: Num(cert.residual),
        iterations: cert.iterations,
        converged: cert.converged,
        strictly_positive: cert.strictly_positive,
        nilpotent: cert.nilpotent,
        simple: simplicity.as_ref().map(|s| s.simple),
        char_poly_derivative: simplicity.as_ref().map(|s| Num(s.derivative_value)),
        char_poly_derivative_fd: simplicity.as_ref().map(|s| Num(s.fd_crosscheck)),
    }))
}

fn perron(
    a: &NonnegativeMatrix,
    o: &Options,
    warnings: &mut Vec<String>,
) -> Result<Results, Failure> {
    let irreducible = structure::is_irreducible(a).irreducible;
    let period = if irreducible {
        Some(structure::period(a)?)
    } else {
        None
    };
    let result = if irreducible {
        perron_irreducible_with(
            a,
            PerronOptions {
                tol: o.tol,
                max_iter: o.max_iter,
            },
        )
    } else {
        warnings.push("matrix is reducible; the Perron vector may have zero coordinates".into());
        perron_fixed_point(a, o.tol, o.max_iter)
    };
    match result {
        Ok(cert) => Ok(perron_results(a, &cert, irreducible, period)),
        Err(pfc_core::Error::PerronNonConvergence(cert)) => Err(Failure::Partial(
            perron_results(a, &cert, irreducible, period),
            format!(
                "Perron iteration did not reach tolerance {:e} in {} iterations (residual {:e})",
                o.tol, cert.iterations, cert.residual
            ),
        )),
        Err(e) => Err(e.into()),
    }
}

fn jentzsch(o: &Options, warnings: &mut Vec<String>) -> Result<Results, Failure> {
    let kernel = Kernel::parse(o.kernel.as_deref().unwrap_or_default())?;
    let rule = QuadratureRule::gauss_legendre(o.nodes)?;
    let r = jentzsch_analyze(&kernel, &rule)?;
    let a = pfc_core::jentzsch::discretize(&kernel, &rule)?;
    let (positivity_condition, _) = schaefer_check(&a);
    let mut sizes: Vec<usize> = [o.nodes / 4, o.nodes / 2, o.nodes]
        .into_iter()
        .filter(|&n| n >= 2)
        .collect();
    sizes.dedup();
    let study = refine_study(&kernel, &sizes)?;
    if !r.simple {
        warnings.push("discretized eigenvalue is not certified simple".into());
    }
    if !study.monotone {
        warnings.push("refinement differences are not decreasing".into());
    }
    Ok(Results::Jentzsch(Box::new(JentzschResults {
        kernel: kernel.description.clone(),
        nodes: nums(rule.nodes()),
        weights: nums(rule.weights()),
        rho: Num(r.rho),
        eigenfunction: nums(&r.eigenfunction),
        min_eigenfunction: Num(r.min_eigenfunction),
        gap_ratio: Num(r.gap_ratio),
        simple: r.simple,
        residual: Num(r.residual),
        positivity_condition,
        refinement: study
            .levels
            .iter()
            .map(|&(nodes, rho)| RefinementLevel {
                nodes,
                rho: Num(rho),
            })
            .collect(),
        refinement_monotone: study.monotone,
    })))
}

fn method_name(m: EigenMethod) -> &'static str {
    match m {
        EigenMethod::Annihilated => "annihilated",
        EigenMethod::Iteration => "iteration",
        EigenMethod::Cesaro => "cesaro",
        EigenMethod::OracleAssisted => "oracle_assisted",
    }
}

fn sequence_results(seq: &NearlyEigenSequence) -> SequenceResults {
    SequenceResults {
        theta: Num(seq.theta),
        functional: nums(&seq.functional.coefficients),
        v_plus: nums(&seq.v_plus),
        v_minus: nums(&seq.v_minus),
        b_norm1: Num(seq.b_norm1),
        exhausted: seq.exhausted,
        near_rational: seq.near_rational,
        entries: seq
            .entries
            .iter()
            .map(|e| SequenceEntry {
                p: e.p,
                eps: Num(e.eps),
                lambda: Num(e.lambda),
                w: nums(&e.w),
                z_norm1: Num(e.z_norm1),
                z_bound: Num(e.z_bound),
                identity_error: Num(e.identity_error),
                lambda_bound_holds: e.lambda_bound_holds,
                shifted_u_in_cone: e.shifted_u_in_cone,
                residual: Num(e.residual),
                method: method_name(e.method),
            })
            .collect(),
    }
}

fn split_results(s: &SpectralSplit) -> SplitResults {
    SplitResults {
        peripheral_dim: s.peripheral_dim,
        peripheral: cplxs(&s.peripheral),
        inner_radius: Num(s.inner_radius),
        r_prime: Num(s.r_prime),
        contour_nodes: s.contour_nodes,
        idempotence_error: Num(s.idempotence_error),
        commutation_error: Num(s.commutation_error),
    }
}

fn decay_results(d: &DecayReport) -> DecayResults {
    DecayResults {
        r_prime: Num(d.r_prime),
        inner_projection_norm1: Num(d.p_doubleprime_norm1),
        threshold_index: d.threshold_index,
        entries: d
            .entries
            .iter()
            .map(|e| DecayEntryResults {
                p: e.p,
                norm: Num(e.norm),
                bound: Num(e.bound),
                holds: e.holds,
            })
            .collect(),
    }
}

fn scenario(name: &str, theta: f64) -> (DMatrix<f64>, ConvexCone, bool) {
    match name {
        "lorentz-rotation" => {
            let (a, c) = scenarios::lorentz_rotation(theta);
            (a, c, true)
        }
        "lorentz-split" => {
            let (a, c) = scenarios::lorentz_split(theta);
            (a, c, true)
        }
        "orthant-cycle" => {
            let (a, c) = scenarios::orthant_cycle();
            (a, c, false)
        }
        _ => {
            let (a, c) = scenarios::nilpotent();
            (a, c, false)
        }
    }
}

fn harness(name: &str, o: &Options, warnings: &mut Vec<String>) -> Result<Results, Failure> {
    let (a, c, rotation) = scenario(name, o.theta);
    let n = a.nrows();
    let sequence = if rotation {
        let (u, v) = scenarios::rotation_eigenvector(n);
        let seq = nearly_eigenvector_sequence(&a, &c, o.theta, &u, &v, o.k)?;
        if seq.exhausted {
            warnings.push(format!(
                "only {} of {} approximants were resolvable",
                seq.entries.len(),
                o.k
            ));
        }
        if seq.near_rational {
            warnings.push("theta / 2pi is rational to working precision".into());
        }
        Some(seq)
    } else {
        None
    };
    let (split, decay) = if name == "lorentz-split" {
        let split = spectral_split(&a, 1e-6)?;
        let decay = sequence.as_ref().map(|s| peripheral_decay(&split, s));
        if decay.as_ref().is_some_and(|d| !d.holds_beyond_threshold()) {
            warnings.push("inner-part decay bound does not hold on the tail".into());
        }
        (Some(split), decay)
    } else {
        (None, None)
    };
    let opts = DriverOptions {
        k: o.k,
        ..DriverOptions::default()
    };
    let driver = match positive_eigenvector_compact_with(&a, &c, opts) {
        Ok(KreinRutmanOutcome::ZeroRadius {
            max_modulus,
            nilpotent,
        }) => DriverResults {
            outcome: "zero_radius",
            rho: Num(0.0),
            vector: None,
            residual: None,
            oracle_rho: Num(max_modulus),
            branch: None,
            power: None,
            theta: None,
            eigen_method: None,
            nilpotent: Some(nilpotent),
        },
        Ok(KreinRutmanOutcome::Eigenpair(p)) => {
            let (branch, power, theta) = match &p.branch {
                DriverBranch::RootsOfUnity { power } => ("roots_of_unity", Some(*power), None),
                DriverBranch::NearlyEigenvector { theta, .. } => {
                    ("nearly_eigenvector", None, Some(Num(*theta)))
                }
            };
            DriverResults {
                outcome: "eigenpair",
                rho: Num(p.rho),
                vector: Some(nums(&p.vector)),
                residual: Some(Num(p.residual)),
                oracle_rho: Num(p.oracle_rho),
                branch: Some(branch),
                power,
                theta,
                eigen_method: Some(method_name(p.method)),
                nilpotent: None,
            }
        }
        Err(e) => return Err(e.into()),
    };
    Ok(Results::Harness(Box::new(HarnessResults {
        scenario: name.to_string(),
        dim: n,
        driver,
        sequence: sequence.as_ref().map(sequence_results),
        split: split.as_ref().map(split_results),
        decay: decay.as_ref().map(decay_results),
    })))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn req(sub: Subcommand, input: Option<&str>) -> Request {
        Request {
            subcommand: sub,
            input: input.map(String::from),
            options: Options::default(),
        }
    }

    #[test]
    fn validation() {
        let mut r = req(Subcommand::Jentzsch, None);
        assert!(matches!(r.validate(), Err(CliError::Input(_))));
        r.options.kernel = Some("const:1".into());
        assert!(r.validate().is_ok());
        r.options.nodes = 1;
        assert!(r.validate().is_err());
        r.options.nodes = 513;
        assert!(r.validate().is_err());
        r.options.nodes = 512;
        r.options.tol = 0.0;
        assert!(r.validate().is_err());
        assert!(req(Subcommand::Perron, None).validate().is_err());
        assert!(req(Subcommand::KrHarness, Some("bogus"))
            .validate()
            .is_err());
        assert!(req(Subcommand::KrHarness, Some("nilpotent"))
            .validate()
            .is_ok());
    }

    #[test]
    fn core_errors_map_to_exit_codes() {
        let e: CliError = pfc_core::Error::ZeroVector.into();
        assert_eq!(e.exit_code(), EXIT_INPUT);
        let e: CliError = pfc_core::Error::NonConvergence {
            iterations: 1,
            residual: 1.0,
        }
        .into();
        assert_eq!(e.exit_code(), EXIT_CONVERGENCE);
    }

    #[test]
    fn perron_non_convergence_keeps_report() {
        let a = NonnegativeMatrix::from_rows(&[[0.5, 1.0, 0.0], [0.0, 0.2, 1.0], [1.0, 0.0, 0.7]])
            .unwrap();
        let o = Options {
            max_iter: 1,
            tol: 1e-15,
            ..Options::default()
        };
        let mut w = Vec::new();
        match perron(&a, &o, &mut w) {
            Err(Failure::Partial(Results::Perron(p), _)) => assert!(!p.converged),
            Ok(_) => panic!("one iteration should not converge"),
            Err(_) => panic!("expected a partial report"),
        }
    }
}
