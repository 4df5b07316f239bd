//! Generalized Ricci flow on invariant data.
//!
//! The state is a left-invariant metric and a closed invariant three-form on a
//! [`LieFrame`](crate::courant::LieFrame). The flow
//!
//! ```text
//! ∂g = −2Rc + ½H² + Λg,     ∂H = −d d*H + ΛH
//! ```
//!
//! is integrated with classical RK4. Hand-reduced ansatz systems live in
//! [`ansatz`] and are cross-checked against the generic right-hand side.

pub mod ansatz;
mod integrate;
pub mod ode;
mod rhs;
mod soliton;

pub use ansatz::{
    circle_bundle_dual_rhs, circle_bundle_rhs, hyperbolic_ode_rhs, milnor_su2_rhs, neck_ode_rhs,
    sphere_ode_rhs, threefold_rhs,
};
pub use ode::{rk4_path, OdePath};
pub use integrate::{integrate, FlowConfig, Sample, Stop, Trajectory};
pub use rhs::{grf_rhs, FlowRhs, FlowState};
pub use soliton::{lambda_homogeneous, lie_derivative_metric, soliton_residual};

#[cfg(test)]
mod tests;
