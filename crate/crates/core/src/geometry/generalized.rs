use nalgebra::{DMatrix, DVector};

use super::connection::{bismut_connection, levi_civita, Sign};
use super::curvature::{codifferential_with, h_norm2, h_squared, ricci, riemann, trace_g};
use super::metric::InvariantMetric;
use crate::courant::{eigenbundle_projections, GeneralizedMetric, GeneralizedVector, LieFrame, ThreeForm};
use crate::{Error, Result};

/// The covectors `φ± = g(π e±, ·)` attached to a divergence `div^G − div = ⟨e, ·⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct DivergenceData {
    pub phi_plus: DVector<f64>,
    pub phi_minus: DVector<f64>,
}

impl DivergenceData {
    pub fn zero(n: usize) -> Self {
        Self {
            phi_plus: DVector::zeros(n),
            phi_minus: DVector::zeros(n),
        }
    }

    /// Splits a general `e ∈ V ⊕ V*` along the eigenbundles of `G`.
    pub fn from_element(metric: &GeneralizedMetric, e: &GeneralizedVector) -> Result<Self> {
        let (ep, em) = eigenbundle_projections(metric, e)?;
        Ok(Self {
            phi_plus: metric.g() * ep.x(),
            phi_minus: metric.g() * em.x(),
        })
    }

    /// `e = φ ∈ V*`, which gives `φ± = ±½φ` for any `b`.
    pub fn from_covector(phi: &DVector<f64>) -> Self {
        Self {
            phi_plus: phi * 0.5,
            phi_minus: phi * -0.5,
        }
    }

    /// `e = 4df`, so `φ₊ = −φ₋ = 2df`.
    pub fn from_gradient(df: &DVector<f64>) -> Self {
        Self::from_covector(&(df * 4.0))
    }
}

/// `(Rc⁺, Rc⁻)` with
/// `Rc⁺ = Rc − ¼H² − ½d*H + ∇⁺φ₊` and `Rc⁻ = Rc − ¼H² + ½d*H − ∇⁻φ₋`.
pub fn generalized_ricci(
    frame: &LieFrame,
    g: &InvariantMetric,
    h: &ThreeForm,
    div: &DivergenceData,
) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let n = frame.dim();
    for d in [g.dim(), h.dim(), div.phi_plus.len(), div.phi_minus.len()] {
        if d != n {
            return Err(Error::DimensionMismatch { expected: n, got: d });
        }
    }
    warn_if_not_closed(frame, h);
    let lc = levi_civita(frame, g);
    let base = ricci(g, &riemann(frame, g, &lc)) - h_squared(g, h) * 0.25;
    let dstar = codifferential_with(&lc, g, h);
    let np = bismut_connection(frame, g, h, Sign::Plus).nabla_covector(&div.phi_plus);
    let nm = bismut_connection(frame, g, h, Sign::Minus).nabla_covector(&div.phi_minus);
    let plus = &base - dstar.matrix() * 0.5 + np;
    let minus = &base + dstar.matrix() * 0.5 - nm;
    Ok((plus, minus))
}

/// `d*φ = −g^{ij}(∇_i φ)_j`.
pub fn codifferential_covector(frame: &LieFrame, g: &InvariantMetric, phi: &DVector<f64>) -> f64 {
    -trace_g(g, &levi_civita(frame, g).nabla_covector(phi))
}

/// `S = R − 1/12|H|² − d*φ − ¼|φ|²` for a closed pair with `div^G − div = ⟨φ, ·⟩`.
pub fn generalized_scalar(frame: &LieFrame, g: &InvariantMetric, h: &ThreeForm, phi: &DVector<f64>) -> Result<f64> {
    let n = frame.dim();
    if phi.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: phi.len(),
        });
    }
    let dphi = frame
        .exterior_d(&crate::courant::Form::from_components(n, 1, phi.as_slice().to_vec())?)?
        .max_abs();
    if dphi > crate::DEFAULT_TOL {
        log::warn!("φ is not closed (|dφ| = {dphi:.3e}); scalar formula assumes a closed pair");
    }
    let lc = levi_civita(frame, g);
    let r = trace_g(g, &ricci(g, &riemann(frame, g, &lc)));
    let dstar = -trace_g(g, &lc.nabla_covector(phi));
    Ok(r - h_norm2(g, h) / 12.0 - dstar - 0.25 * g.covector_norm2(phi))
}

/// Per-side scalars `S± = R − 1/12|H|² ∓ 2d*φ± − |φ±|²`, meaningful for compatible
/// pairs that need not be closed. For `e = φ ∈ V*` both reduce to [`generalized_scalar`].
pub fn generalized_scalar_pm(
    frame: &LieFrame,
    g: &InvariantMetric,
    h: &ThreeForm,
    div: &DivergenceData,
) -> Result<(f64, f64)> {
    let n = frame.dim();
    for d in [g.dim(), h.dim(), div.phi_plus.len(), div.phi_minus.len()] {
        if d != n {
            return Err(Error::DimensionMismatch { expected: n, got: d });
        }
    }
    let lc = levi_civita(frame, g);
    let base = trace_g(g, &ricci(g, &riemann(frame, g, &lc))) - h_norm2(g, h) / 12.0;
    let dstar = |phi: &DVector<f64>| -trace_g(g, &lc.nabla_covector(phi));
    Ok((
        base - 2.0 * dstar(&div.phi_plus) - g.covector_norm2(&div.phi_plus),
        base + 2.0 * dstar(&div.phi_minus) - g.covector_norm2(&div.phi_minus),
    ))
}

fn warn_if_not_closed(frame: &LieFrame, h: &ThreeForm) {
    if let Ok(d) = frame.exterior_d(&h.to_form()) {
        let dh = d.max_abs();
        if dh > crate::DEFAULT_TOL {
            log::warn!("H is not closed (|dH| = {dh:.3e})");
        }
    }
}
