use nalgebra::{DMatrix, DVector};
use rand::Rng;

use super::Ctx;
use crate::courant::{LieFrame, ThreeForm};
use crate::flow::ode::rk4_path;
use crate::flow::{
    circle_bundle_rhs, grf_rhs, hyperbolic_ode_rhs, integrate, milnor_su2_rhs, neck_ode_rhs, sphere_ode_rhs, FlowConfig,
    FlowState, Stop, Trajectory,
};
use crate::geometry::InvariantMetric;
use crate::pde::{
    krf_lambda, lambda_dense, lambda_eigen, pde_integrate, PdeConfig, PdeFlow, PeriodicGrid, PotentialState,
    DEFAULT_PERIOD,
};
use crate::Result;

pub(crate) fn steps(t_end: f64, dt: f64) -> usize {
    (t_end / dt).round() as usize
}

fn diag_state(d: &[f64], h: ThreeForm) -> Result<FlowState> {
    FlowState::new(InvariantMetric::diagonal(d)?, h)
}

fn e123(n: usize, c: f64) -> Result<ThreeForm> {
    ThreeForm::basis(n, 0, 1, 2, c)
}

/// Largest per-step decrease of the λ-functional divided by the step.
pub(crate) fn lambda_drop(traj: &Trajectory) -> f64 {
    traj.samples
        .windows(2)
        .map(|w| (w[0].lambda - w[1].lambda) / (w[1].t - w[0].t))
        .fold(f64::NEG_INFINITY, f64::max)
}

fn write_traj(ctx: &mut Ctx, file: &str, title: &str, cols: &[usize], traj: &Trajectory) -> Result<()> {
    ctx.csv(file, Some((title, cols, false)), |p| traj.write_csv(std::fs::File::create(p)?))
}

/// Runs to `t_end` without the fixed-point stop so `λ(T)` is sampled at `T`.
fn run_sphere(eta: f64, lam0: f64, dt: f64, t_end: f64) -> Result<Trajectory> {
    let cfg = FlowConfig {
        dt,
        steps: steps(t_end, dt),
        tol: 0.0,
        ..FlowConfig::default()
    };
    integrate(&LieFrame::milnor(), &diag_state(&[lam0; 3], e123(3, eta)?)?, &cfg)
}

fn run_milnor(a: f64, b: f64, c: f64, dt: f64, t_end: f64) -> Result<Trajectory> {
    let cfg = FlowConfig {
        dt,
        steps: steps(t_end, dt),
        ..FlowConfig::default()
    };
    integrate(&LieFrame::milnor(), &diag_state(&[a, b, c], e123(3, 1.0)?)?, &cfg)
}

pub(super) fn sphere(ctx: &mut Ctx) -> Result<()> {
    let sc = ctx.sc;
    let (eta, lam0, dt, t_end) = (sc.param("eta0"), sc.param("lambda0"), sc.param("dt"), sc.param("t_end"));
    let traj = run_sphere(eta, lam0, dt, t_end)?;
    let ode = rk4_path(|y| sphere_ode_rhs(y[0], eta).map(|d| vec![d]), &[lam0], dt, t_end);
    let agree = traj
        .samples
        .iter()
        .zip(&ode.y)
        .map(|(s, y)| (s.g[(0, 0)] - y[0]).abs())
        .fold(0.0, f64::max);
    ctx.at_most("generic flow matches the scalar ODE", agree, 1e-10);
    if eta == 0.0 {
        let dev = traj
            .samples
            .iter()
            .filter(|s| s.t <= 0.2 * lam0 + 1e-12)
            .map(|s| (s.g[(0, 0)] - (lam0 - 4.0 * s.t)).abs())
            .fold(0.0, f64::max);
        ctx.at_most("|λ(t) − (λ₀ − 4t)| for t ≤ λ₀/5", dev, 1e-9);
        if let Stop::Singularity(why) = &traj.stop {
            ctx.info("singular time (exact λ₀/4)", traj.last.t);
            ctx.note(format!("stopped: {why}"));
        }
    } else {
        let end = traj.last.g.get(0, 0);
        ctx.at_most("|λ(T) − |η₀|/2|", (end - 0.5 * eta.abs()).abs(), 1e-6);
        ctx.info("T", traj.last.t);
    }
    ctx.at_most("λ-functional per-step decrease / dt", lambda_drop(&traj), 1e-8);

    let mut rng = ctx.rng();
    let frame = LieFrame::milnor();
    let mut worst: f64 = 0.0;
    for _ in 0..sc.count("samples") {
        let (l, e) = (rng.random_range(0.1..5.0), rng.random_range(-3.0..3.0));
        let r = grf_rhs(&frame, &diag_state(&[l; 3], e123(3, e)?)?, 0.0)?;
        worst = worst.max((r.dg - DMatrix::identity(3, 3) * sphere_ode_rhs(l, e)?).amax());
    }
    ctx.at_most("cross-engine: generic vs sphere rhs (random states)", worst, 1e-10);
    write_traj(ctx, "trajectory.csv", "round sphere: g_1_1 and λ-functional", &[2, 11], &traj)
}

pub(super) fn hyperbolic(ctx: &mut Ctx) -> Result<()> {
    let sc = ctx.sc;
    let (eta, lam0, dt, t_end) = (sc.param("eta0"), sc.param("lambda0"), sc.param("dt"), sc.param("t_end"));
    let cfg = FlowConfig {
        dt,
        steps: steps(t_end, dt),
        ..FlowConfig::default()
    };
    let traj = integrate(&LieFrame::hyperbolic(3), &diag_state(&[lam0; 3], e123(3, eta)?)?, &cfg)?;
    let ode = rk4_path(|y| hyperbolic_ode_rhs(y[0], eta).map(|d| vec![d]), &[lam0], dt, t_end);
    let agree = traj
        .samples
        .iter()
        .zip(&ode.y)
        .map(|(s, y)| (s.g[(0, 0)] - y[0]).abs() / y[0])
        .fold(0.0, f64::max);
    ctx.at_most("generic flow matches the scalar ODE (relative)", agree, 1e-10);
    let lam = ode.component(0);
    let half = lam.len() / 2;
    let (t1, t2) = (ode.t[half], *ode.t.last().unwrap_or(&0.0));
    let slope = (lam[lam.len() - 1] - lam[half]) / (t2 - t1);
    ctx.at_most("|late slope of λ − 4|", (slope - 4.0).abs(), 1e-2);
    ctx.info("λ(T)/T", lam[lam.len() - 1] / t2);
    write_traj(ctx, "trajectory.csv", "hyperbolic: g_1_1", &[2], &traj)
}

pub(super) fn neck(ctx: &mut Ctx) -> Result<()> {
    let sc = ctx.sc;
    let path = rk4_path(
        |y| neck_ode_rhs(y[0], y[1]).map(|(a, b)| vec![a, b]),
        &[sc.param("phi0"), sc.param("psi0")],
        sc.param("dt"),
        sc.param("t_end"),
    );
    let (phi, psi) = (path.component(0), path.component(1));
    let up = phi.windows(2).filter(|w| w[1] >= w[0]).count();
    let down = psi.windows(2).filter(|w| w[1] <= w[0]).count();
    ctx.at_most("steps where φ fails to decrease", up as f64, 0.0);
    ctx.at_most("steps where ψ fails to increase", down as f64, 0.0);
    let last = path.last().to_vec();
    ctx.at_most("final φ", last[0], 0.05);
    ctx.at_least("final ψ", last[1], 3.0);
    ctx.info("pinch time", *path.t.last().unwrap_or(&0.0));
    if let Some(why) = &path.stopped {
        ctx.note(format!("stopped: {why}"));
    }
    ctx.csv("neck.csv", Some(("neckpinch: φ and ψ", &[2, 3], false)), |p| {
        use std::io::Write;
        let mut w = std::io::BufWriter::new(std::fs::File::create(p)?);
        writeln!(w, "t,phi,psi")?;
        for (t, y) in path.t.iter().zip(&path.y) {
            writeln!(w, "{t:.17e},{:.17e},{:.17e}", y[0], y[1])?;
        }
        Ok(())
    })
}

/// `R²` of a least-squares line through `(x, y)`.
pub(crate) fn linear_fit(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
    let (sxy, sxx, syy) = pts.iter().fold((0.0, 0.0, 0.0), |(a, b, c), (x, y)| {
        (a + (x - mx) * (y - my), b + (x - mx).powi(2), c + (y - my).powi(2))
    });
    let slope = sxy / sxx;
    (slope, sxy * sxy / (sxx * syy))
}

pub(super) fn su2_milnor(ctx: &mut Ctx) -> Result<()> {
    let sc = ctx.sc;
    let (a, b, c, dt, t_end) = (sc.param("a"), sc.param("b"), sc.param("c"), sc.param("dt"), sc.param("t_end"));
    let traj = run_milnor(a, b, c, dt, t_end)?;
    let abc: Vec<(f64, f64, f64, f64)> = traj
        .samples
        .iter()
        .map(|s| (s.t, s.g[(0, 0)], s.g[(1, 1)], s.g[(2, 2)]))
        .collect();
    let order = abc.iter().map(|&(_, a, b, c)| (a - b).max(b - c)).fold(f64::NEG_INFINITY, f64::max);
    ctx.at_most("max(A − B, B − C) along the flow", order, 0.0);
    let ratio_rise = abc
        .windows(2)
        .map(|w| (w[1].3 - w[1].1) / w[1].1 - (w[0].3 - w[0].1) / w[0].1)
        .fold(f64::NEG_INFINITY, f64::max);
    ctx.at_most("per-step increase of (C − A)/A", ratio_rise, 1e-12);
    let &(t_last, a_last, _, c_last) = abc.last().expect("trajectory has samples");
    ctx.at_most("C − A at the end", c_last - a_last, 1e-6);
    ctx.info("end time", t_last);
    let pts: Vec<(f64, f64)> = abc
        .iter()
        .filter(|s| s.3 - s.1 > 1e-9)
        .map(|s| (s.0, (s.3 - s.1).ln()))
        .collect();
    let (slope, r2) = linear_fit(&pts);
    ctx.at_least("R² of log(C − A) against t", r2, 0.99);
    ctx.info("fitted decay rate of C − A", -slope);
    ctx.at_most("λ-functional per-step decrease / dt", lambda_drop(&traj), 1e-8);

    let ode = rk4_path(
        |y| milnor_su2_rhs(y[0], y[1], y[2]).map(|(p, q, r)| vec![p, q, r]),
        &[a, b, c],
        dt,
        traj.last.t,
    );
    let agree = traj
        .samples
        .iter()
        .zip(&ode.y)
        .map(|(s, y)| (0..3).map(|i| (s.g[(i, i)] - y[i]).abs()).fold(0.0, f64::max))
        .fold(0.0, f64::max);
    ctx.at_most("generic flow matches the Milnor ODE", agree, 1e-10);

    let mut rng = ctx.rng();
    let frame = LieFrame::milnor();
    let mut worst: f64 = 0.0;
    for _ in 0..sc.count("samples") {
        let d: Vec<f64> = (0..3).map(|_| rng.random_range(0.2..3.0)).collect();
        let r = grf_rhs(&frame, &diag_state(&d, e123(3, 1.0)?)?, 0.0)?;
        let (p, q, s) = milnor_su2_rhs(d[0], d[1], d[2])?;
        worst = worst.max((r.dg - DMatrix::from_diagonal(&DVector::from_vec(vec![p, q, s]))).amax());
    }
    ctx.at_most("cross-engine: generic vs Milnor rhs (random states)", worst, 1e-10);
    write_traj(ctx, "trajectory.csv", "Milnor SU(2): A, B, C", &[2, 5, 7], &traj)
}

pub(super) fn product(ctx: &mut Ctx) -> Result<()> {
    let sc = ctx.sc;
    let (eta, dt, t_end) = (sc.param("eta"), sc.param("dt"), sc.param("t_end"));
    let frame = LieFrame::milnor().direct_sum(&LieFrame::milnor());
    let cfg = FlowConfig {
        dt,
        steps: steps(t_end, dt),
        ..FlowConfig::default()
    };
    let traj = integrate(&frame, &FlowState::new(InvariantMetric::identity(6), e123(6, eta)?)?, &cfg)?;
    // each factor follows its own sphere ODE
    let first = rk4_path(|y| sphere_ode_rhs(y[0], eta).map(|d| vec![d]), &[1.0], dt, t_end);
    let second = rk4_path(|y| sphere_ode_rhs(y[0], 0.0).map(|d| vec![d]), &[1.0], dt, t_end);
    let (mut d1, mut d2, mut cross) = (0.0_f64, 0.0_f64, 0.0_f64);
    for ((s, y1), y2) in traj.samples.iter().zip(&first.y).zip(&second.y) {
        let g1 = s.g.view((0, 0), (3, 3)) - DMatrix::<f64>::identity(3, 3) * y1[0];
        let g2 = s.g.view((3, 3), (3, 3)) - DMatrix::<f64>::identity(3, 3) * y2[0];
        d1 = d1.max(g1.amax());
        d2 = d2.max(g2.amax());
        cross = cross.max(s.g.view((0, 3), (3, 3)).amax());
    }
    ctx.at_most("first factor vs its own sphere ODE", d1, 1e-12);
    ctx.at_most("second factor vs its own sphere ODE", d2, 1e-12);
    ctx.at_most("off-diagonal blocks", cross, 1e-14);
    if eta.abs() == 2.0 {
        let drift = traj
            .samples
            .iter()
            .map(|s| (s.g.view((0, 0), (3, 3)) - DMatrix::<f64>::identity(3, 3)).amax())
            .fold(0.0, f64::max);
        ctx.at_most("Einstein factor stays fixed", drift, 1e-12);
    }
    ctx.csv("trajectory.csv", Some(("S³×S³: g_1_1 and g_4_4", &[2, 17], false)), |p| {
        traj.write_csv(std::fs::File::create(p)?)
    })
}

pub(super) fn hopf_rym(ctx: &mut Ctx) -> Result<()> {
    let sc = ctx.sc;
    let (k0, l0, a, dt, t_end) = (sc.param("k0"), sc.param("l0"), sc.param("a"), sc.param("dt"), sc.param("t_end"));
    let (dk, dl) = circle_bundle_rhs(k0, l0, a)?;
    ctx.info("dK at start", dk);
    ctx.info("dL at start", dl);
    let ode = rk4_path(|y| circle_bundle_rhs(y[0], y[1], a).map(|(p, q)| vec![p, q]), &[k0, l0], dt, t_end);
    if let Some(why) = &ode.stopped {
        ctx.note(format!("ODE stopped: {why}"));
    }
    // the bundle metric in the Milnor frame is diag(4a²K, 4L, 4L)
    let frame = LieFrame::milnor();
    let cfg = FlowConfig {
        dt,
        steps: steps(t_end, dt),
        ..FlowConfig::default()
    };
    let s0 = diag_state(&[4.0 * a * a * k0, 4.0 * l0, 4.0 * l0], ThreeForm::zeros(3))?;
    let traj = integrate(&frame, &s0, &cfg)?;
    let mut rows = Vec::new();
    let mut dev: f64 = 0.0;
    for (s, y) in traj.samples.iter().zip(&ode.y) {
        let (kg, lg) = (s.g[(0, 0)] / (4.0 * a * a), s.g[(1, 1)] / 4.0);
        dev = dev.max((kg - y[0]).abs()).max((lg - y[1]).abs());
        rows.push([s.t, y[0], y[1], kg, lg]);
    }
    ctx.at_most("generic flow matches the (K, L) system", dev, 1e-10);

    let mut rng = ctx.rng();
    let mut worst: f64 = 0.0;
    for _ in 0..sc.count("samples") {
        let (k, l, a) = (rng.random_range(0.1..3.0), rng.random_range(0.1..3.0), rng.random_range(0.2..2.0));
        let r = grf_rhs(&frame, &diag_state(&[4.0 * a * a * k, 4.0 * l, 4.0 * l], ThreeForm::zeros(3))?, 0.0)?;
        let (dk, dl) = circle_bundle_rhs(k, l, a)?;
        let want = DMatrix::from_diagonal(&DVector::from_vec(vec![4.0 * a * a * dk, 4.0 * dl, 4.0 * dl]));
        worst = worst.max((r.dg - want).amax());
    }
    ctx.at_most("cross-engine: generic vs circle-bundle rhs (random states)", worst, 1e-10);
    ctx.csv("circle_bundle.csv", Some(("Hopf bundle: K and L", &[2, 3], false)), |p| {
        use std::io::Write;
        let mut w = std::io::BufWriter::new(std::fs::File::create(p)?);
        writeln!(w, "t,K,L,K_generic,L_generic")?;
        for r in &rows {
            let cells: Vec<String> = r.iter().map(|v| format!("{v:.17e}")).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    })
}

pub(super) fn lambda_monotone(ctx: &mut Ctx) -> Result<()> {
    let runs = [
        ("sphere η₀=0 λ₀=1", run_sphere(0.0, 1.0, 1e-4, 0.2)?),
        ("sphere η₀=2 λ₀=0.5", run_sphere(2.0, 0.5, 1e-2, 5.0)?),
        ("sphere η₀=2 λ₀=3", run_sphere(2.0, 3.0, 1e-2, 5.0)?),
        ("Milnor (0.3, 0.5, 0.9)", run_milnor(0.3, 0.5, 0.9, 1e-3, 10.0)?),
    ];
    for (label, traj) in &runs {
        ctx.at_most(&format!("λ per-step decrease / dt, {label}"), lambda_drop(traj), 1e-8);
    }

    let n = ctx.sc.count("eigen_n");
    let v = PeriodicGrid::line(n, DEFAULT_PERIOD, |x| (2.0 * std::f64::consts::PI * x / DEFAULT_PERIOD).cos())?;
    let it = lambda_eigen(&v)?;
    ctx.at_most("grid λ vs dense eigensolve (cosine potential)", (it.lambda - lambda_dense(&v)?).abs(), 1e-8);
    ctx.at_most("ground state sign changes", if it.ground.inf() > 0.0 { 0.0 } else { 1.0 }, 0.0);
    // constant potential R − |H|²/12 of the round sphere with H = 2 dV
    let frame = LieFrame::milnor();
    let c = crate::flow::lambda_homogeneous(&frame, &InvariantMetric::identity(3), &e123(3, 2.0)?);
    let flat = PeriodicGrid::line(n, DEFAULT_PERIOD, |_| c)?;
    ctx.at_most("grid λ of constant potential minus the constant", (lambda_eigen(&flat)?.lambda - c).abs(), 1e-12);

    let m = ctx.sc.count("torus_n");
    let u0 = PeriodicGrid::square(m, DEFAULT_PERIOD, |x, y| 0.1 * x.sin() * y.sin())?;
    let tr = pde_integrate(
        PdeFlow::Krf,
        PotentialState::new(u0),
        &PdeConfig {
            steps: 2000,
            sample_every: 100,
            lambda_every: Some(1),
            ..PdeConfig::default()
        },
    )?;
    let ls: Vec<f64> = tr.samples.iter().filter_map(|s| s.lambda).collect();
    let drop = ls.windows(2).map(|w| w[0] - w[1]).fold(f64::NEG_INFINITY, f64::max);
    ctx.at_most("torus λ per-sample decrease", drop, 1e-10);
    ctx.info("torus λ at start", ls[0]);
    ctx.info("torus λ at end", krf_lambda(&tr.last.u)?.lambda);

    let (label, traj) = &runs[3];
    write_traj(ctx, "milnor_lambda.csv", &format!("λ-functional, {label}"), &[11], traj)?;
    ctx.csv("torus_lambda.csv", Some(("λ along the torus flow", &[4], false)), |p| tr.write_summary_csv(p))
}
