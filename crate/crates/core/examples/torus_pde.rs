//! Scalar potential flows on the flat torus: the Kähler-Ricci flow
//! `u̇ = log(1 + ½Δu)` and its generalized split version, integrated to
//! equilibrium, plus a Richardson estimate of the spatial order.

use genricci::pde::{pde_integrate, richardson_order, PdeConfig, PdeFlow, PeriodicGrid, PotentialState, DEFAULT_PERIOD};
use genricci::Result;

fn main() -> Result<()> {
    let n = 32;
    let u0 = PeriodicGrid::square(n, DEFAULT_PERIOD, |x, y| 0.1 * x.sin() * y.sin())?;
    for flow in [PdeFlow::Krf, PdeFlow::Gkrf] {
        let (stop_tol, osc_tol) = match flow {
            PdeFlow::Krf => (Some(1e-6), None),
            PdeFlow::Gkrf => (None, Some(1e-5)),
        };
        let cfg = PdeConfig { sample_every: 500, stop_tol, osc_tol, ..PdeConfig::default() };
        let tr = pde_integrate(flow, PotentialState::new(u0.clone()), &cfg)?;
        println!("{}: dt = {:.3e}, {} steps, smallest factor {:.4}", flow.name(), tr.dt, tr.steps_taken, tr.min_factor);
        for s in &tr.samples {
            println!("  t = {:8.4}  sup|u̇| = {:.3e}  osc u = {:.3e}", s.t, s.sup_abs_udot, s.osc_u);
        }
        println!("  monitors hold: {}", tr.monitors_hold(1e-10));
    }
    let order = richardson_order(PdeFlow::Krf, 16, DEFAULT_PERIOD, |x, y| 0.1 * x.sin() * y.sin())?;
    println!("spatial order of u̇: {order:.3}");
    Ok(())
}
