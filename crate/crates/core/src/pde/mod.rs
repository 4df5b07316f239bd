//! Scalar reductions of the flow on flat tori, discretized on uniform periodic
//! grids with second-order central differences.

mod eigen;
mod flows;
mod grid;

pub use eigen::{krf_lambda, lambda_dense, lambda_eigen, lambda_eigen_with, EigenConfig, EigenResult};
pub use flows::{
    gkrf_rhs, krf_rhs, pde_integrate, richardson_order, PdeConfig, PdeFlow, PdeSample, PdeTrajectory,
    PotentialState, POSITIVITY_FLOOR,
};
pub use grid::{PeriodicGrid, DEFAULT_PERIOD};
