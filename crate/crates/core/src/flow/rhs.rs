use nalgebra::DMatrix;

use crate::courant::{LieFrame, ThreeForm};
use crate::geometry::{codifferential_h, h_squared, ricci_lc, InvariantMetric};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct FlowState {
    pub g: InvariantMetric,
    pub h: ThreeForm,
    pub t: f64,
}

impl FlowState {
    pub fn new(g: InvariantMetric, h: ThreeForm) -> Result<Self> {
        if g.dim() != h.dim() {
            return Err(Error::DimensionMismatch {
                expected: g.dim(),
                got: h.dim(),
            });
        }
        Ok(Self { g, h, t: 0.0 })
    }
}

#[derive(Clone, Debug)]
pub struct FlowRhs {
    pub dg: DMatrix<f64>,
    pub dh: ThreeForm,
}

impl FlowRhs {
    /// `‖dg‖_F / ‖g‖_F`.
    pub fn relative_norm(&self, g: &InvariantMetric) -> f64 {
        self.dg.norm() / g.matrix().norm()
    }
}

/// `dg = −2Rc + ½H² + Λg`, `dH = −d(d*H) + ΛH`.
pub fn grf_rhs(frame: &LieFrame, state: &FlowState, lambda: f64) -> Result<FlowRhs> {
    let n = frame.dim();
    if state.g.dim() != n || state.h.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: state.g.dim(),
        });
    }
    let (g, h) = (&state.g, &state.h);
    let dg = ricci_lc(frame, g) * -2.0 + h_squared(g, h) * 0.5 + g.matrix() * lambda;
    let dstar = codifferential_h(frame, g, h);
    let ddstar = frame.exterior_d(&dstar.to_form())?;
    let dh = &ThreeForm::from_form(&ddstar)?.scaled(-1.0) + &h.scaled(lambda);
    Ok(FlowRhs { dg, dh })
}
