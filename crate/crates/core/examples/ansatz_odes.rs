//! Hand-reduced flows: the round sphere, hyperbolic space, the neckpinch
//! and the Hopf circle bundle, each integrated with RK4 and cross-checked
//! against the generic right-hand side where a frame exists.

use genricci::courant::{LieFrame, ThreeForm};
use genricci::flow::{
    circle_bundle_rhs, grf_rhs, hyperbolic_ode_rhs, neck_ode_rhs, rk4_path, sphere_ode_rhs, FlowState,
};
use genricci::geometry::InvariantMetric;
use genricci::Result;

fn main() -> Result<()> {
    for (eta, lam0) in [(0.0, 1.0), (2.0, 0.5), (2.0, 3.0)] {
        let p = rk4_path(|y| sphere_ode_rhs(y[0], eta).map(|d| vec![d]), &[lam0], 1e-3, 5.0);
        let stop = p.stopped.as_deref().unwrap_or("completed");
        println!("sphere η₀ = {eta}, λ₀ = {lam0}: λ = {:.9} at t = {:.4} ({stop})", p.last()[0], p.t.last().unwrap());
    }

    // generic engine on SU(2) with g = λ·id, H = η e¹²³
    let (lam, eta) = (1.3, 0.8);
    let st = FlowState::new(InvariantMetric::diagonal(&[lam; 3])?, ThreeForm::basis(3, 0, 1, 2, eta)?)?;
    let generic = grf_rhs(&LieFrame::milnor(), &st, 0.0)?.dg[(0, 0)];
    println!("sphere rhs: generic {generic:.12}, reduced {:.12}", sphere_ode_rhs(lam, eta)?);

    let p = rk4_path(|y| hyperbolic_ode_rhs(y[0], 1.0).map(|d| vec![d]), &[1.0], 1e-2, 50.0);
    println!("hyperbolic: λ(50)/50 = {:.4}", p.last()[0] / 50.0);

    let p = rk4_path(|y| neck_ode_rhs(y[0], y[1]).map(|(a, b)| vec![a, b]), &[1.0, 1.0], 1e-4, 2.0);
    println!("neckpinch: φ = {:.2e}, ψ = {:.4} at t = {:.4}", p.last()[0], p.last()[1], p.t.last().unwrap());

    let p = rk4_path(|y| circle_bundle_rhs(y[0], y[1], 1.0).map(|(a, b)| vec![a, b]), &[1.0, 1.0], 1e-3, 0.3);
    println!("Hopf bundle: (K, L)(0.3) = ({:.9}, {:.9})", p.last()[0], p.last()[1]);
    Ok(())
}
