//! Hidden ℤ₂ symmetry operators of asymmetric quantum Rabi models.
//!
//! - [`algebra`]: exact parity-graded, normal-ordered boson polynomials with
//!   2×2 matrix structure.
//! - [`models`]: the AQRM, anisotropic AQRM, asymmetric Rabi-Stark model and
//!   its anisotropic version, with their ε-conditions.
//! - [`solver`] / [`catalog`]: J_M derived from `[J, H] = 0` by exact
//!   nullspace computation, and the known closed forms.
//! - [`casimir`]: `J² = Σ c_k H^k` fitted and certified exactly.
//! - [`verify`]: the exact identity suite.
//! - [`fock`]: truncated Fock-space spectra, J-parity labels and crossing
//!   classification.

pub mod algebra;
pub mod casimir;
pub mod catalog;
pub mod exact;
pub mod fock;
pub mod models;
pub mod scalar;
pub mod serial;
pub mod solver;
pub mod verify;

pub use algebra::{Entry, Monomial, OperatorPolynomial};
pub use models::{ModelKind, ModelParams, Stark};
pub use scalar::{rat, Coefficient, Rational, Scalar, ScalarMode};
pub use solver::{SolveOutcome, SymmetryOperator};
