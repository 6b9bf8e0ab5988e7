//! Perron–Frobenius and Krein–Rutman spectral toolkit.
//!
//! * [`structure`]: irreducibility, primitivity, period and normal forms of
//!   nonnegative matrices, decided on the support digraph.
//! * [`perron`]: Perron root and vector with Collatz–Wielandt enclosures,
//!   simplicity of the root, dominance of complex matrices.
//! * [`jentzsch`]: positive integral kernels on `[0, 1]` via Nyström
//!   quadrature.
//! * [`cone`], [`rotation`], [`krein_rutman`]: cone-preserving operators and
//!   the construction of their positive eigenvectors.
//! * [`spectrum`]: dense reference eigensolver used for gaps, splits and
//!   cross-checks.

// `!(x > 0.0)` is deliberate: NaN has to fail positivity checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cone;
pub mod error;
pub mod jentzsch;
pub mod krein_rutman;
pub(crate) mod linalg;
pub mod matrix;
pub mod perron;
pub mod rotation;
pub mod spectrum;
pub mod structure;

pub use cone::{ConeEigenpair, ConeKind, ConvexCone, EigenMethod, PositiveFunctional};
pub use error::{Error, Result};
pub use jentzsch::{JentzschReport, Kernel, QuadratureRule};
pub use krein_rutman::{KreinRutmanOutcome, NearlyEigenSequence, SpectralSplit};
pub use matrix::{ComplexMatrix, EntrywiseOrder, NonnegativeMatrix, OrderedVector};
pub use perron::{PerronCertificate, PerronOptions, SimplicityReport};
pub use structure::{IrreducibilityReport, Primitivity};

pub use nalgebra;
pub use num_complex;
