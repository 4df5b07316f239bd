//! T-duality along a circle fiber: Buscher rules, the dilaton shift and
//! executable checks on Hopf-type examples.
//!
//! Basic forms are coefficient arrays over a local base frame of dimension
//! `m`, so every transform here is pointwise.

mod buscher;
mod checks;
mod dilaton;

pub use buscher::{buscher_dual, CircleBundleData};
pub use checks::{
    einstein_exchange_check, flow_commutation_check, CommutationReport, ExchangeReport,
};
pub use dilaton::{dilaton_shift, dilaton_shift_constant, VerticalDensity};
