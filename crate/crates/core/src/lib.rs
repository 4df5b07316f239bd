//! Numerical laboratory for generalized Ricci flow.
//!
//! The crate covers the computable core of generalized Riemannian geometry on
//! invariant data:
//!
//! - [`courant`]: the generalized tangent space `V ⊕ V*`, generalized metrics,
//!   the twisted Dorfman bracket on invariant sections of a Lie frame, and
//!   Courant-algebroid axiom residuals.
//! - [`geometry`]: Levi-Civita and Bismut connections of left-invariant
//!   metrics, curvature, `H²`, `d*H`, generalized Ricci and scalar curvature,
//!   and the Bianchi identity suite.
//! - [`flow`]: generalized Ricci flow as an ODE on invariant data, the
//!   hand-reduced ansatz systems, solitons and the λ-functional.
//! - [`tduality`]: Buscher rules on circle-bundle data, the dilaton shift and
//!   executable T-duality checks.
//! - [`pde`]: scalar potential flows on the flat torus and the lowest
//!   Schrödinger eigenvalue on a periodic grid.
//! - [`scenarios`]: named experiments with CSV/report/plot-script output and
//!   exit-code semantics, driven by the `genricci` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod courant;
pub mod error;
pub mod flow;
pub mod geometry;
pub mod pde;
pub mod scenarios;
pub mod tduality;
pub(crate) mod tensor;

pub use error::{Error, Result};

/// Default residual tolerance for algebraic identities.
pub const DEFAULT_TOL: f64 = 1e-10;
