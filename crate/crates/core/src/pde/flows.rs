use std::io::Write;
use std::path::Path;

use super::eigen::krf_lambda;
use super::grid::PeriodicGrid;
use crate::{Error, Result};

/// Smallest admissible metric factor.
pub const POSITIVITY_FLOOR: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PdeFlow {
    /// `u̇ = log(1 + ½Δu)`.
    Krf,
    /// `u̇ = log((1 + ½D²ₓu) / (1 − ½D²ᵧu))`.
    Gkrf,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PotentialState {
    pub u: PeriodicGrid,
    pub t: f64,
}

impl PotentialState {
    pub fn new(u: PeriodicGrid) -> Self {
        Self { u, t: 0.0 }
    }
}

fn check_factor(u: &PeriodicGrid, k: usize, factor: f64) -> Result<()> {
    if factor > POSITIVITY_FLOOR {
        Ok(())
    } else {
        let (i, j) = u.node(k);
        Err(Error::Admissibility { i, j, factor })
    }
}

pub fn krf_rhs(u: &PeriodicGrid) -> Result<PeriodicGrid> {
    let lap = u.laplacian();
    let mut out = Vec::with_capacity(lap.len());
    for (k, l) in lap.into_iter().enumerate() {
        let f = 1.0 + 0.5 * l;
        check_factor(u, k, f)?;
        out.push(f.ln());
    }
    u.with_values(out)
}

pub fn gkrf_rhs(u: &PeriodicGrid) -> Result<PeriodicGrid> {
    if u.is_line() {
        return Err(Error::InvalidInput("the generalized Kähler flow needs a square grid".into()));
    }
    let (dxx, dyy) = (u.dxx(), u.dyy());
    let mut out = Vec::with_capacity(dxx.len());
    for k in 0..dxx.len() {
        let (p, m) = (1.0 + 0.5 * dxx[k], 1.0 - 0.5 * dyy[k]);
        check_factor(u, k, p)?;
        check_factor(u, k, m)?;
        out.push((p / m).ln());
    }
    u.with_values(out)
}

/// Smallest metric factor over the grid, used for the stability estimate.
fn min_factor(flow: PdeFlow, u: &PeriodicGrid) -> f64 {
    match flow {
        PdeFlow::Krf => u.laplacian().iter().map(|l| 1.0 + 0.5 * l).fold(f64::INFINITY, f64::min),
        PdeFlow::Gkrf => u
            .dxx()
            .iter()
            .zip(u.dyy())
            .map(|(x, y)| (1.0 + 0.5 * x).min(1.0 - 0.5 * y))
            .fold(f64::INFINITY, f64::min),
    }
}

impl PdeFlow {
    pub fn rhs(self, u: &PeriodicGrid) -> Result<PeriodicGrid> {
        match self {
            PdeFlow::Krf => krf_rhs(u),
            PdeFlow::Gkrf => gkrf_rhs(u),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PdeFlow::Krf => "krf",
            PdeFlow::Gkrf => "gkrf",
        }
    }
}

#[derive(Clone, Debug)]
pub struct PdeConfig {
    /// Defaults to `0.2 h²`.
    pub dt: Option<f64>,
    pub steps: usize,
    /// Stop once `sup|u̇|` drops below this.
    pub stop_tol: Option<f64>,
    /// Also stop once `osc(u)` drops below this.
    pub osc_tol: Option<f64>,
    /// Record a summary row every this many steps (the last step is always recorded).
    pub sample_every: usize,
    /// Compute λ every this many samples (Kähler flow only).
    pub lambda_every: Option<usize>,
}

impl Default for PdeConfig {
    fn default() -> Self {
        Self {
            dt: None,
            steps: 20_000,
            stop_tol: None,
            osc_tol: None,
            sample_every: 1,
            lambda_every: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PdeSample {
    pub t: f64,
    pub sup_abs_udot: f64,
    pub sup_udot: f64,
    pub inf_udot: f64,
    pub mean_udot: f64,
    pub osc_u: f64,
    pub min_factor: f64,
    pub lambda: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct PdeTrajectory {
    pub flow: PdeFlow,
    pub dt: f64,
    pub samples: Vec<PdeSample>,
    pub last: PotentialState,
    pub steps_taken: usize,
    /// Largest per-step breach of the maximum principle: growth of `sup u̇`,
    /// `sup|u̇|`, or decay of `inf u̇`. Nonpositive means the monitors held.
    pub monitor_violation: f64,
    /// Smallest metric factor seen at any accepted step.
    pub min_factor: f64,
}

impl PdeTrajectory {
    pub fn monitors_hold(&self, slack: f64) -> bool {
        self.monitor_violation <= slack
    }

    /// Least-squares slope of `−log sup|u̇|` against `t` over samples above `floor`.
    pub fn decay_rate(&self, floor: f64) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .samples
            .iter()
            .filter(|s| s.sup_abs_udot > floor)
            .map(|s| (s.t, s.sup_abs_udot.ln()))
            .collect();
        if pts.len() < 3 {
            return None;
        }
        let n = pts.len() as f64;
        let (mt, my) = pts.iter().fold((0.0, 0.0), |(a, b), (t, y)| (a + t / n, b + y / n));
        let (sty, stt) = pts
            .iter()
            .fold((0.0, 0.0), |(a, b), (t, y)| (a + (t - mt) * (y - my), b + (t - mt).powi(2)));
        (stt > 0.0).then(|| -sty / stt)
    }

    pub fn write_summary_csv(&self, path: &Path) -> Result<()> {
        let with_lambda = self.samples.iter().any(|s| s.lambda.is_some());
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        write!(w, "t,sup_abs_udot,osc_u")?;
        writeln!(w, "{}", if with_lambda { ",lambda" } else { "" })?;
        for s in &self.samples {
            write!(w, "{:.17e},{:.17e},{:.17e}", s.t, s.sup_abs_udot, s.osc_u)?;
            if with_lambda {
                match s.lambda {
                    Some(l) => write!(w, ",{l:.17e}")?,
                    None => write!(w, ",")?,
                }
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

fn sample(flow: PdeFlow, state: &PotentialState, udot: &PeriodicGrid, lambda: bool) -> Result<PdeSample> {
    Ok(PdeSample {
        t: state.t,
        sup_abs_udot: udot.sup_abs(),
        sup_udot: udot.sup(),
        inf_udot: udot.inf(),
        mean_udot: udot.mean(),
        osc_u: state.u.osc(),
        min_factor: min_factor(flow, &state.u),
        lambda: if lambda { Some(krf_lambda(&state.u)?.lambda) } else { None },
    })
}

/// Heun (explicit RK2) time stepping. Any stage that breaches the positivity
/// floor aborts with [`Error::Admissibility`].
pub fn pde_integrate(flow: PdeFlow, state0: PotentialState, cfg: &PdeConfig) -> Result<PdeTrajectory> {
    let h = state0.u.spacing();
    let dt = cfg.dt.unwrap_or(0.2 * h * h);
    if !(dt > 0.0) {
        return Err(Error::Config(format!("dt must be positive, got {dt}")));
    }
    if cfg.sample_every == 0 || cfg.lambda_every == Some(0) {
        return Err(Error::Config("sampling intervals must be positive".into()));
    }
    if cfg.lambda_every.is_some() && flow != PdeFlow::Krf {
        return Err(Error::Config("λ monitoring is implemented for the Kähler flow only".into()));
    }
    let mut udot = flow.rhs(&state0.u)?;
    let factor0 = min_factor(flow, &state0.u);
    // the linearized operator is ½Δ/factor; Heun is stable for dt·4/(h²·factor) ≤ 2
    if dt * 4.0 / (h * h * factor0) > 2.0 {
        log::warn!("dt = {dt:e} exceeds the explicit stability estimate {:e}", 0.5 * h * h * factor0);
    }
    let want_lambda = |count: usize| cfg.lambda_every.is_some_and(|e| count.is_multiple_of(e));

    let mut state = state0;
    let mut samples = vec![sample(flow, &state, &udot, want_lambda(0))?];
    let mut monitor_violation = f64::NEG_INFINITY;
    let mut min_seen = factor0;
    let mut steps_taken = 0;
    let done = |s: &PdeSample| {
        cfg.stop_tol.is_some_and(|tol| s.sup_abs_udot < tol) || cfg.osc_tol.is_some_and(|tol| s.osc_u < tol)
    };
    if !done(&samples[0]) {
        for step in 1..=cfg.steps {
            let pred = state.u.with_values(
                state.u.values().iter().zip(udot.values()).map(|(u, d)| u + dt * d).collect(),
            )?;
            let k2 = flow.rhs(&pred)?;
            let next = state.u.with_values(
                (0..state.u.len())
                    .map(|k| state.u.values()[k] + 0.5 * dt * (udot.values()[k] + k2.values()[k]))
                    .collect(),
            )?;
            let next_udot = flow.rhs(&next)?;
            monitor_violation = monitor_violation
                .max(next_udot.sup() - udot.sup())
                .max(udot.inf() - next_udot.inf())
                .max(next_udot.sup_abs() - udot.sup_abs());
            state = PotentialState {
                u: next,
                t: step as f64 * dt,
            };
            udot = next_udot;
            steps_taken = step;
            min_seen = min_seen.min(min_factor(flow, &state.u));

            let stop = cfg.stop_tol.is_some_and(|tol| udot.sup_abs() < tol)
                || cfg.osc_tol.is_some_and(|tol| state.u.osc() < tol);
            if step % cfg.sample_every == 0 || stop || step == cfg.steps {
                let count = samples.len();
                samples.push(sample(flow, &state, &udot, want_lambda(count))?);
            }
            if stop {
                break;
            }
        }
    }
    Ok(PdeTrajectory {
        flow,
        dt,
        samples,
        last: state,
        steps_taken,
        monitor_violation,
        min_factor: min_seen,
    })
}

/// Observed spatial order of `u̇` at `t = 0` from three nested square grids
/// `n, 2n, 4n`, compared on the coarse nodes.
pub fn richardson_order(flow: PdeFlow, n: usize, period: f64, u0: impl Fn(f64, f64) -> f64) -> Result<f64> {
    let rhs = |m: usize| -> Result<PeriodicGrid> { flow.rhs(&PeriodicGrid::square(m, period, &u0)?) };
    let (a, b, c) = (rhs(n)?, rhs(2 * n)?, rhs(4 * n)?);
    let mut e1: f64 = 0.0;
    let mut e2: f64 = 0.0;
    for j in 0..n {
        for i in 0..n {
            e1 = e1.max((a.get(i, j) - b.get(2 * i, 2 * j)).abs());
            e2 = e2.max((b.get(2 * i, 2 * j) - c.get(4 * i, 4 * j)).abs());
        }
    }
    if e2 == 0.0 {
        return Err(Error::InvalidInput("differences vanish; order is undefined".into()));
    }
    Ok((e1 / e2).log2())
}
