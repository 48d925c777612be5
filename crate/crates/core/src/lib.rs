//! Numerical workbench for two-dimensional chiral tight-binding models whose
//! Bloch symbol is compatible with a momentum-dependent glide operator.
//!
//! The crate covers the full verification chain for the bulk-edge
//! correspondence of such models:
//!
//! * [`symbol`] — matrix-valued Laurent polynomials on the two-torus and
//!   their pointwise algebra;
//! * [`models`] — glide-compatible bulk models, dimerised presets, chain
//!   models, reduced edge symbols, and seeded gapped perturbations;
//! * [`invariants`] — winding numbers, the glide degree constraint, the
//!   Clifford-action obstruction, and the local mod-2 edge invariant;
//! * [`toeplitz`] — half-space compressions at fixed edge momentum, kernel
//!   counting, Fredholm indices, the mod-2 family index, and the compact
//!   commutator/involution checks behind it;
//! * [`realspace`] — truncated edge lattices, zero-mode detection and
//!   classification, and bulk-edge correspondence checks;
//! * [`homotopy`] — explicit symbol paths (doubling and rotation tricks)
//!   with gap, compatibility, and invariant-constancy verification.
//!
//! Everything is generic over the real scalar type via [`scalar::Scalar`];
//! the `*64` aliases at the crate root fix `f64` for production use.

pub mod accept;
pub mod error;
pub mod homotopy;
pub mod invariants;
pub mod models;
pub mod realspace;
pub mod report;
pub mod scalar;
pub mod symbol;
pub mod toeplitz;

pub use scalar::Scalar;

/// Double-precision complex number.
pub type C64 = num_complex::Complex<f64>;
/// Double-precision Laurent symbol.
pub type LaurentMatrix64 = symbol::LaurentMatrix<f64>;
/// Double-precision torus point.
pub type TorusPoint64 = symbol::TorusPoint<f64>;
/// Double-precision glide-compatible bulk model.
pub type PgModel64 = models::PgModel<f64>;
/// Double-precision chain model.
pub type SshModel64 = models::SshModel<f64>;
/// Double-precision reduced edge symbol.
pub type EdgeSymbol64 = models::EdgeSymbol<f64>;
