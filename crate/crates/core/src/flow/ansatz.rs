//! Scalar reductions of the flow under symmetric ansätze.

use nalgebra::DMatrix;

use crate::courant::LieFrame;
use crate::geometry::{ricci_lc, scalar, InvariantMetric};
use crate::{Error, Result};

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositive { name, value })
    }
}

/// Round sphere `g = λ g_{S³}`, `H = η₀ dV_{g_{S³}}`: `λ̇ = −4 + η₀²/λ²`.
pub fn sphere_ode_rhs(lambda: f64, eta0: f64) -> Result<f64> {
    positive("lambda", lambda)?;
    Ok(-4.0 + eta0 * eta0 / (lambda * lambda))
}

/// Hyperbolic space `g = λ g_{H³}`, `H = η₀ dV`: `λ̇ = 4 + η₀²/λ²`.
pub fn hyperbolic_ode_rhs(lambda: f64, eta0: f64) -> Result<f64> {
    positive("lambda", lambda)?;
    Ok(4.0 + eta0 * eta0 / (lambda * lambda))
}

/// Neck ansatz: `φ̇ = −2 + ½φ⁻¹ψ⁻¹`, `ψ̇ = ½φ⁻²`.
pub fn neck_ode_rhs(phi: f64, psi: f64) -> Result<(f64, f64)> {
    positive("phi", phi)?;
    positive("psi", psi)?;
    Ok((-2.0 + 0.5 / (phi * psi), 0.5 / (phi * phi)))
}

/// Diagonal metrics `A μ¹² + B μ²² + C μ³²` in a Milnor frame with `H = μ¹²³`.
pub fn milnor_su2_rhs(a: f64, b: f64, c: f64) -> Result<(f64, f64, f64)> {
    positive("A", a)?;
    positive("B", b)?;
    positive("C", c)?;
    let f = |x: f64, y: f64, z: f64| (-4.0 * x * x + 4.0 * (y - z) * (y - z) + 1.0) / (y * z);
    Ok((f(a, b, c), f(b, c, a), f(c, a, b)))
}

/// Hopf-type circle bundle over the round two-sphere with curvature `F = a·ω`:
/// `K̇ = −a²K²/L²`, `L̇ = −2 + a²K/L`.
pub fn circle_bundle_rhs(k: f64, l: f64, a: f64) -> Result<(f64, f64)> {
    positive("K", k)?;
    positive("L", l)?;
    let a2 = a * a;
    Ok((-a2 * k * k / (l * l), -2.0 + a2 * k / l))
}

/// The T-dual system: `K̂̇ = a²/L̂²`, `L̂̇ = −2 + a²/(K̂L̂)`.
pub fn circle_bundle_dual_rhs(k_hat: f64, l_hat: f64, a: f64) -> Result<(f64, f64)> {
    positive("K_hat", k_hat)?;
    positive("L_hat", l_hat)?;
    let a2 = a * a;
    Ok((a2 / (l_hat * l_hat), -2.0 + a2 / (k_hat * l_hat)))
}

/// Three-dimensional reduction with `H = φ dV_g` and constant `φ`:
/// `ġ = −2Rc + φ²g`, `φ̇ = Rφ − 3/2 φ³`.
pub fn threefold_rhs(frame: &LieFrame, g: &InvariantMetric, phi: f64) -> Result<(DMatrix<f64>, f64)> {
    if frame.dim() != 3 || g.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: frame.dim(),
        });
    }
    let rc = ricci_lc(frame, g);
    let r = scalar(g, &rc);
    Ok((rc * -2.0 + g.matrix() * (phi * phi), r * phi - 1.5 * phi.powi(3)))
}
