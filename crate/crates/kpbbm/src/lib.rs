//! Phase-plane, Melnikov, and slow-manifold analysis of solitary waves in
//! the delayed KP-BBM equation
//!
//! ```text
//! (u_t + u_x − 2a(f∗u)u_x − b u_xxt + τ u_xx)_x + k u_yy = 0.
//! ```
//!
//! Traveling waves u = φ(x + y − ct) of the undelayed equation satisfy a
//! planar Hamiltonian system whose homoclinic loop is the solitary wave.
//! A distributed delay kernel f and the viscous term τ u_xx perturb that
//! loop; at first order in τ the splitting of its stable and unstable
//! manifolds is measured by a Melnikov integral Δ(c). This crate computes
//! the unperturbed phase portrait, evaluates Δ(c) for local and nonlocal
//! delay kernels, solves Δ(c*) = 0 for the wave speed selected by the
//! perturbation, and verifies the picture by direct integration of the
//! reduced slow systems.
//!
//! Entry points:
//! - [`model`]: parameters, equilibria, Hamiltonian, homoclinic closed form;
//! - [`kernels`]: the delay kernels and their normalization checks;
//! - [`melnikov`]: Δ(c) for every kernel/viscosity variant;
//! - [`speed`]: the selected speed c* with a transversality certificate;
//! - [`dynamics`]: reduced slow systems, manifold expansions, and the
//!   measured manifold splitting that [`melnikov`] predicts;
//! - [`commands`]: the CSV/JSON entry points behind the `kpbbm` binary.

// Guards written as !(x > 0) reject NaN, which x <= 0 would let through;
// integrator coefficient tables keep their published digit counts.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::excessive_precision)]

pub mod commands;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod kernels;
pub mod melnikov;
pub mod model;
pub mod ode;
pub mod quad;
pub mod roots;
pub mod speed;

pub use error::{Error, Result};
pub use melnikov::{DelayKind, MelnikovVariant};
pub use model::{FamilyParams, ModelParams, PhasePoint};
