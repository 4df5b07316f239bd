use std::io::Write;

use nalgebra::DMatrix;

use super::rhs::{grf_rhs, FlowRhs, FlowState};
use crate::courant::{LieFrame, ThreeForm};
use crate::geometry::{h_norm2, levi_civita, ricci, riemann, scalar, InvariantMetric};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct FlowConfig {
    /// Normalization `Λ ∈ {−1, 0, 1}`.
    pub lambda: f64,
    pub dt: f64,
    pub steps: usize,
    /// Fixed point when `‖dg‖_F/‖g‖_F` drops below this.
    pub tol: f64,
    /// Halve the step while `‖dg‖·dt` exceeds a tenth of the smallest eigenvalue of `g`.
    pub adaptive: bool,
    pub min_eigenvalue: f64,
    pub curvature_cap: f64,
    pub sample_every: usize,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            lambda: 0.0,
            dt: 1e-3,
            steps: 1000,
            tol: 1e-9,
            adaptive: false,
            min_eigenvalue: 1e-8,
            curvature_cap: 1e6,
            sample_every: 1,
        }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if ![-1.0, 0.0, 1.0].contains(&self.lambda) {
            return Err(Error::Config(format!("normalization must be -1, 0 or 1, got {}", self.lambda)));
        }
        if self.sample_every == 0 {
            return Err(Error::Config("sample_every must be at least 1".into()));
        }
        if !(self.tol >= 0.0) {
            return Err(Error::Config("tol must be nonnegative".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Sample {
    pub t: f64,
    pub g: DMatrix<f64>,
    pub h: ThreeForm,
    pub scalar: f64,
    pub h_norm2: f64,
    pub lambda: f64,
    pub rhs_norm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Stop {
    Completed,
    FixedPoint,
    Singularity(String),
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub stop: Stop,
    /// Last accepted state; always positive definite.
    pub last: FlowState,
}

impl Trajectory {
    /// Turns a singularity stop into [`Error::FlowStopped`].
    pub fn into_result(self) -> Result<Self> {
        match &self.stop {
            Stop::Singularity(reason) => Err(Error::FlowStopped {
                t: self.last.t,
                reason: reason.clone(),
            }),
            _ => Ok(self),
        }
    }

    /// Header: `t`, then `g_i_j` for `i ≤ j`, `H_i_j_k` for `i < j < k`
    /// (1-based), then `R,H2,lambda,rhs_norm`.
    pub fn csv_header(n: usize) -> String {
        let mut cols = vec!["t".to_string()];
        for i in 0..n {
            for j in i..n {
                cols.push(format!("g_{}_{}", i + 1, j + 1));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    cols.push(format!("H_{}_{}_{}", i + 1, j + 1, k + 1));
                }
            }
        }
        cols.extend(["R", "H2", "lambda", "rhs_norm"].map(String::from));
        cols.join(",")
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let n = self.last.g.dim();
        writeln!(w, "{}", Self::csv_header(n))?;
        for s in &self.samples {
            let mut row = vec![s.t];
            for i in 0..n {
                for j in i..n {
                    row.push(s.g[(i, j)]);
                }
            }
            for i in 0..n {
                for j in i + 1..n {
                    for k in j + 1..n {
                        row.push(s.h.get(i, j, k));
                    }
                }
            }
            row.extend([s.scalar, s.h_norm2, s.lambda, s.rhs_norm]);
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }
}

fn sample(frame: &LieFrame, state: &FlowState, rhs: &FlowRhs) -> Sample {
    let rc = ricci(&state.g, &riemann(frame, &state.g, &levi_civita(frame, &state.g)));
    let r = scalar(&state.g, &rc);
    let hn = h_norm2(&state.g, &state.h);
    Sample {
        t: state.t,
        g: state.g.matrix().clone(),
        h: state.h.clone(),
        scalar: r,
        h_norm2: hn,
        lambda: r - hn / 12.0,
        rhs_norm: rhs.relative_norm(&state.g),
    }
}

fn shifted(state: &FlowState, k: &FlowRhs, h: f64) -> Result<FlowState> {
    Ok(FlowState {
        g: InvariantMetric::new(state.g.matrix() + &k.dg * h)?,
        h: &state.h + &k.dh.scaled(h),
        t: state.t + h,
    })
}

fn rk4_candidate(frame: &LieFrame, state: &FlowState, k1: &FlowRhs, h: f64, lambda: f64) -> Result<FlowState> {
    let k2 = grf_rhs(frame, &shifted(state, k1, 0.5 * h)?, lambda)?;
    let k3 = grf_rhs(frame, &shifted(state, &k2, 0.5 * h)?, lambda)?;
    let k4 = grf_rhs(frame, &shifted(state, &k3, h)?, lambda)?;
    let dg = (&k1.dg + &k2.dg * 2.0 + &k3.dg * 2.0 + &k4.dg) * (h / 6.0);
    let dh = &(&(&k1.dh + &k2.dh.scaled(2.0)) + &k3.dh.scaled(2.0)) + &k4.dh;
    let g_new = state.g.matrix() + dg;
    if g_new.iter().chain(dh.components()).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { t: state.t + h });
    }
    Ok(FlowState {
        g: InvariantMetric::new(g_new)?,
        h: &state.h + &dh.scaled(h / 6.0),
        t: state.t + h,
    })
}

fn check_admissible(frame: &LieFrame, state: &FlowState, cfg: &FlowConfig) -> std::result::Result<(), String> {
    let eig = state.g.min_eigenvalue();
    if eig < cfg.min_eigenvalue {
        return Err(format!("smallest metric eigenvalue {eig:.3e} below {:.1e}", cfg.min_eigenvalue));
    }
    let rm = riemann(frame, &state.g, &levi_civita(frame, &state.g)).norm(&state.g);
    if rm > cfg.curvature_cap {
        return Err(format!("|Rm| = {rm:.3e} exceeds {:.1e}", cfg.curvature_cap));
    }
    Ok(())
}

/// Classical RK4 with optional step halving; stops at fixed points and singularities.
pub fn integrate(frame: &LieFrame, state0: &FlowState, cfg: &FlowConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let min_h = cfg.dt * 1e-6;
    let t_end = state0.t + cfg.steps as f64 * cfg.dt;
    let mut state = state0.clone();
    let mut k1 = grf_rhs(frame, &state, cfg.lambda)?;
    let mut samples = vec![sample(frame, &state, &k1)];
    let mut stop = Stop::Completed;
    if k1.relative_norm(&state.g) < cfg.tol {
        return Ok(Trajectory {
            samples,
            stop: Stop::FixedPoint,
            last: state,
        });
    }
    let mut accepted = 0usize;
    'outer: while state.t < t_end - 1e-9 * cfg.dt {
        let mut h = cfg.dt.min(t_end - state.t);
        if cfg.adaptive {
            let eig = state.g.min_eigenvalue();
            while k1.dg.norm() * h > 0.1 * eig && h > min_h {
                h *= 0.5;
            }
        }
        let next = loop {
            let reason = match rk4_candidate(frame, &state, &k1, h, cfg.lambda) {
                Ok(c) => match check_admissible(frame, &c, cfg) {
                    Ok(()) => break c,
                    Err(r) => r,
                },
                Err(Error::NonFinite { t }) => return Err(Error::NonFinite { t }),
                Err(e) => e.to_string(),
            };
            if cfg.adaptive && h > min_h {
                h *= 0.5;
                continue;
            }
            stop = Stop::Singularity(format!("{reason} at t = {:.6}", state.t + h));
            break 'outer;
        };
        state = next;
        k1 = grf_rhs(frame, &state, cfg.lambda)?;
        accepted += 1;
        let fixed = k1.relative_norm(&state.g) < cfg.tol;
        let last = state.t >= t_end - 1e-9 * cfg.dt;
        if accepted.is_multiple_of(cfg.sample_every) || fixed || last {
            samples.push(sample(frame, &state, &k1));
        }
        if fixed {
            stop = Stop::FixedPoint;
            break;
        }
    }
    if samples.last().map(|s| s.t) != Some(state.t) {
        samples.push(sample(frame, &state, &k1));
    }
    Ok(Trajectory {
        samples,
        stop,
        last: state,
    })
}
