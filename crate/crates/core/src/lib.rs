//! Decide the Liouville property for generators of Lévy processes.
//!
//! The generator 𝓛_ψ of a Lévy process acts as the Fourier multiplier −ψ(ξ),
//! where ψ is the characteristic exponent determined by a triplet (b, Q, ν).
//! Every bounded distributional solution of 𝓛_ψ f = 0 is constant if, and
//! only if, the zero set {ψ = 0} is trivial. For rational discrete models the
//! zero set is a closed subgroup of ℝⁿ that this crate computes exactly, as a
//! subspace ⊕ relative-lattice normal form over arbitrary-precision rationals.
//!
//! The main pipeline:
//!
//! * [`triplet`] / [`symbol`] — Lévy triplets and evaluation of ψ(ξ), exact
//!   closed forms, truncated symbols ψ_n, compensated quadrature for density
//!   Lévy measures.
//! * [`groups`] — exact algebra of closed additive subgroups of ℝⁿ (Hermite
//!   normal form lattices, orthogonal subgroups, sums, membership).
//! * [`zeroset`] — {ψ = 0} as an exact group, the Liouville verdict, and the
//!   independent triplet-side characterization used as a cross-check.
//! * [`bernstein`] — Bernstein functions, their right-half-plane extension
//!   and subordination g∘ψ.
//! * [`grid`] / [`operators`] — periodic-grid laboratory: spectral and
//!   integro-differential application of 𝓛_ψ, distributional pairings,
//!   harmonic counterexamples, resolvent/semigroup fixed points.
//! * [`model`] / [`report`] — model-definition files, deterministic reports.

pub mod bernstein;
pub mod grid;
pub mod groups;
pub mod model;
pub mod operators;
pub mod rational;
pub mod report;
pub mod scalar;
pub mod symbol;
pub mod triplet;
pub mod zeroset;

pub use groups::{ClosedSubgroup, LatticeScale};
pub use scalar::Scalar;
pub use symbol::SymbolHandle;
pub use triplet::{LevyMeasure, LevyTriplet};
pub use zeroset::LiouvilleVerdict;
