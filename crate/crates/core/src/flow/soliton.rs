use nalgebra::{DMatrix, DVector};

use crate::courant::{LieFrame, ThreeForm, TwoForm};
use crate::geometry::{codifferential_h, h_norm2, h_squared, ricci_lc, scalar, InvariantMetric};
use crate::Result;

/// `(L_X g)(Y,Z) = −g([X,Y],Z) − g(Y,[X,Z])` for invariant `X`.
pub fn lie_derivative_metric(frame: &LieFrame, g: &InvariantMetric, x: &DVector<f64>) -> DMatrix<f64> {
    let ad = frame.ad(x);
    let ga = g.matrix() * &ad;
    -(&ga + ga.transpose())
}

/// Residuals `Rc − ¼H² + ½L_X g` and `½d*H − ½B` of the steady soliton system.
pub fn soliton_residual(
    frame: &LieFrame,
    g: &InvariantMetric,
    h: &ThreeForm,
    x: &DVector<f64>,
    b: &TwoForm,
) -> Result<(DMatrix<f64>, TwoForm)> {
    let ix_h = h.to_form().interior(x.as_slice())?;
    let closed = &b.to_form() + &ix_h;
    let d = frame.exterior_d(&closed)?.max_abs();
    if d > crate::DEFAULT_TOL {
        log::warn!("soliton data has d(B + i_X H) = {d:.3e}");
    }
    let sym = ricci_lc(frame, g) - h_squared(g, h) * 0.25 + lie_derivative_metric(frame, g, x) * 0.5;
    let skew = &codifferential_h(frame, g, h).scaled(0.5) - &b.scaled(0.5);
    Ok((sym, skew))
}

/// `λ = R − 1/12|H|²`; on homogeneous data the Schrödinger ground state is constant.
pub fn lambda_homogeneous(frame: &LieFrame, g: &InvariantMetric, h: &ThreeForm) -> f64 {
    scalar(g, &ricci_lc(frame, g)) - h_norm2(g, h) / 12.0
}
