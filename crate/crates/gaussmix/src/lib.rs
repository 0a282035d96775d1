//! Deterministic simulator for convex mixtures of Gaussian bosonic states.
//!
//! Quadrature convention: ħ = 2, ordering x₁, p₁, …, x_n, p_n, vacuum
//! covariance = 𝟙. Under this convention a symmetric matrix V is a valid
//! covariance matrix iff V + iΩ ⪰ 0, where Ω is the block-diagonal symplectic
//! form with 2×2 blocks [[0, 1], [−1, 0]].
//!
//! The crate provides, bottom-up:
//!
//! * [`symplectic`] — single Gaussian states, symplectic operations, validity
//!   checks, overlaps, Wigner evaluation;
//! * [`mixture`] — finite weighted mixtures of Gaussian states and
//!   interval-post-selected homodyne conditioning (exact and quadrature-grid
//!   paths);
//! * [`monotones`] — the κ resource measure for the squeezing and 1×1
//!   entanglement free sets, the explicit-decomposition upper bound on its
//!   convex-roof extension, and variance measures;
//! * [`protocols`] — one-shot and multi-copy squeezing distillation and
//!   multi-copy entanglement distillation, plus a deterministic sweep driver;
//! * [`fock`] — a truncated number-basis oracle used to cross-validate the
//!   Gaussian closed forms at small scale;
//! * [`numint`] — Gauss–Legendre nodes, adaptive Simpson, and Gaussian
//!   interval masses;
//! * [`io`] — plain-text serialization of states and mixtures;
//! * [`checks`] — seeded randomized property suites and independent scan
//!   oracles used by the test batteries.

pub mod checks;
pub mod error;
pub mod fock;
pub mod io;
pub mod mixture;
pub mod monotones;
pub mod numint;
pub mod protocols;
pub mod symplectic;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
