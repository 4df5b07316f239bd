//! Curvature of left-invariant metrics with closed three-form on a Lie frame.
//!
//! Everything here is finite-dimensional algebra on frame components. Indices
//! follow the frame: `Γ^k_{ij}` for connections, `Rm_{ijkl} = g(R(e_i,e_j)e_k, e_l)`
//! for curvature, and `Rc_{jk} = g^{il} Rm_{ijkl}`, so the round three-sphere
//! has `Rc = 2g`.

mod bianchi;
mod connection;
mod curvature;
mod generalized;
mod metric;

pub use bianchi::{bianchi_suite, BianchiReport};
pub use connection::{bismut_connection, levi_civita, Connection, Sign};
pub use curvature::{
    bismut_ricci, bismut_scalar, codifferential_h, h_norm2, h_squared, ricci, ricci_lc, riemann, scalar,
    scalar_lc, trace_g, BismutRicci, CurvatureTensor,
};
pub use generalized::{codifferential_covector, generalized_ricci, generalized_scalar, generalized_scalar_pm, DivergenceData};
pub use metric::{cartan_three_form, InvariantMetric};

#[cfg(test)]
mod tests;
