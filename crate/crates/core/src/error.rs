use thiserror::Error;

use crate::perron::PerronCertificate;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension {0} outside the supported range 1..={max}", max = crate::matrix::MAX_DIM)]
    InvalidDimension(usize),

    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("negative entry {value} at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("non-finite entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("vector has negative coordinate {value} at index {index}")]
    NegativeCoordinate { index: usize, value: f64 },

    #[error("zero vector")]
    ZeroVector,

    #[error("matrix is reducible")]
    Reducible,

    #[error("matrix is irreducible")]
    Irreducible,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no convergence after {} iterations (residual {:e})", .0.iterations, .0.residual)]
    PerronNonConvergence(Box<PerronCertificate>),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("Perron vector lost strict positivity at index {index} (value {value:e})")]
    PositivityBreakdown { index: usize, value: f64 },

    #[error("negative kernel sample {value} at (s, t) = ({s}, {t})")]
    NegativeKernel { s: f64, t: f64, value: f64 },

    #[error("kernel sample {value} at (s, t) = ({s}, {t}) is not strictly positive")]
    KernelNotPositive { s: f64, t: f64, value: f64 },

    #[error("invalid kernel description: {0}")]
    InvalidKernel(String),

    #[error("invalid quadrature rule: {0}")]
    InvalidQuadrature(String),

    #[error("invalid cone: {0}")]
    InvalidCone(String),

    #[error("operator does not preserve the cone: {0}")]
    ConeNotPreserved(String),

    #[error("vector lies in the negative cone")]
    InNegativeCone,

    #[error("decomposition failed: {0}")]
    Decomposition(String),

    #[error("no spectral gap: eigenvalue modulus {modulus} lies in ({threshold}, 1)")]
    NoSpectralGap { modulus: f64, threshold: f64 },

    #[error("cone harness failed: {reason}")]
    Harness {
        reason: String,
        /// Eigenpair recovered by the reference eigensolver, when one exists.
        fallback: Option<(f64, Vec<f64>)>,
    },
}

impl Error {
    /// True for failures caused by an iteration budget or numerical breakdown
    /// rather than by bad input.
    pub fn is_convergence_failure(&self) -> bool {
        matches!(
            self,
            Error::PerronNonConvergence(_)
                | Error::NonConvergence { .. }
                | Error::PositivityBreakdown { .. }
                | Error::Harness { .. }
        )
    }
}
