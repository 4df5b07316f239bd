//! Generalized tangent space `V ⊕ V*`, generalized metrics and the twisted
//! Dorfman bracket on invariant sections.

mod dorfman;
mod forms;
mod frame;
mod generalized;
mod io;

pub use dorfman::{courant_axiom_report, dorfman_jacobiator, dorfman_invariant, CourantReport};
pub use forms::{Form, ThreeForm, TwoForm};
pub use frame::{Bracket, LieFrame};
pub use generalized::{
    b_field_matrix, b_field_transform, eigenbundle_projections, generalized_metric, neutral_matrix,
    neutral_pair, GeneralizedMetric, GeneralizedVector,
};
pub use io::InvariantData;
pub(crate) use io::{matrix_to_rows, rows_to_matrix};

/// `d` on invariant forms; see [`LieFrame::exterior_d`].
pub fn exterior_d_invariant(frame: &LieFrame, form: &Form) -> crate::Result<Form> {
    frame.exterior_d(form)
}

#[cfg(test)]
mod tests;
