use std::time::Instant;

use super::Ctx;
use crate::pde::{
    pde_integrate, richardson_order, PdeConfig, PdeFlow, PdeTrajectory, PeriodicGrid, PotentialState, DEFAULT_PERIOD,
    POSITIVITY_FLOOR,
};
use crate::Result;

fn initial(ctx: &Ctx) -> Result<PeriodicGrid> {
    let amp = ctx.sc.param("amp");
    PeriodicGrid::square(ctx.sc.count("n"), DEFAULT_PERIOD, |x, y| amp * x.sin() * y.sin())
}

fn outputs(ctx: &mut Ctx, u0: &PeriodicGrid, tr: &PdeTrajectory, title: &str) -> Result<()> {
    ctx.csv("summary.csv", Some((title, &[2, 3], true)), |p| tr.write_summary_csv(p))?;
    for (name, grid, t) in [("u_initial.csv", u0, 0.0), ("u_final.csv", &tr.last.u, tr.last.t)] {
        let mut side = None;
        ctx.csv(name, None, |p| {
            side = Some(grid.write_csv(p, t)?);
            Ok(())
        })?;
        ctx.files.extend(side);
    }
    Ok(())
}

pub(super) fn krf(ctx: &mut Ctx) -> Result<()> {
    let start = Instant::now();
    let sc = ctx.sc;
    let u0 = initial(ctx)?;
    let lambda_every = sc.count("lambda_every");
    let cfg = PdeConfig {
        steps: sc.count("steps"),
        stop_tol: Some(sc.param("stop_tol")),
        sample_every: sc.count("sample_every").max(1),
        lambda_every: (lambda_every > 0).then_some(lambda_every),
        ..PdeConfig::default()
    };
    let tr = pde_integrate(PdeFlow::Krf, PotentialState::new(u0.clone()), &cfg)?;
    ctx.at_least("smallest factor 1 + ½Δu", tr.min_factor, POSITIVITY_FLOOR);
    ctx.at_most("max per-step growth of sup u̇, sup|u̇| or −inf u̇", tr.monitor_violation, 1e-10);
    let last = tr.samples.last().expect("at least one sample");
    ctx.at_most("final sup|u̇|", last.sup_abs_udot, sc.param("stop_tol"));
    ctx.info("steps taken", tr.steps_taken as f64);
    ctx.info("final time", tr.last.t);
    if let Some(rate) = tr.decay_rate(1e-12) {
        ctx.info("empirical decay rate of sup|u̇|", rate);
    }
    let amp = sc.param("amp");
    let order = richardson_order(PdeFlow::Krf, sc.count("richardson_n"), DEFAULT_PERIOD, |x, y| {
        amp * x.sin() * y.sin()
    })?;
    ctx.at_least("spatial order of u̇ (Richardson, three grids)", order, 1.9);
    outputs(ctx, &u0, &tr, "torus Kähler–Ricci: sup|u̇| and osc(u)")?;
    ctx.at_most("wall time (s)", start.elapsed().as_secs_f64(), 60.0);
    Ok(())
}

pub(super) fn gkrf(ctx: &mut Ctx) -> Result<()> {
    let sc = ctx.sc;
    let u0 = initial(ctx)?;
    let cfg = PdeConfig {
        steps: sc.count("steps"),
        osc_tol: Some(sc.param("osc_tol")),
        sample_every: sc.count("sample_every").max(1),
        ..PdeConfig::default()
    };
    let tr = pde_integrate(PdeFlow::Gkrf, PotentialState::new(u0.clone()), &cfg)?;
    ctx.at_most("final osc(u)", tr.last.u.osc(), sc.param("osc_tol"));
    ctx.at_least("smallest factor min(1 + ½D²ₓu, 1 − ½D²ᵧu)", tr.min_factor, POSITIVITY_FLOOR);
    ctx.at_most("max per-step growth of sup u̇, sup|u̇| or −inf u̇", tr.monitor_violation, 1e-10);
    let centered = |s: &crate::pde::PdeSample| (s.sup_udot - s.mean_udot).max(s.mean_udot - s.inf_udot);
    let (first, last) = (&tr.samples[0], tr.samples.last().expect("at least one sample"));
    if centered(first) > 0.0 {
        ctx.at_most("sup|u̇ − mean u̇| final / initial", centered(last) / centered(first), 1e-3);
    }
    ctx.info("steps taken", tr.steps_taken as f64);
    ctx.info("final time", tr.last.t);
    if let Some(rate) = tr.decay_rate(1e-12) {
        ctx.info("empirical decay rate of sup|u̇|", rate);
    }
    outputs(ctx, &u0, &tr, "torus generalized Kähler–Ricci: sup|u̇| and osc(u)")
}
