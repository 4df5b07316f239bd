use std::io::Write;
use std::path::Path;

use nalgebra::DVector;

use super::buscher::{buscher_dual, CircleBundleData};
use super::dilaton::{dilaton_shift, VerticalDensity};
use crate::courant::{generalized_metric, GeneralizedVector, LieFrame, ThreeForm, TwoForm};
use crate::flow::ode::{rk4_path, OdePath};
use crate::flow::{circle_bundle_dual_rhs, circle_bundle_rhs};
use crate::geometry::{generalized_ricci, generalized_scalar, generalized_scalar_pm, DivergenceData, InvariantMetric};
use crate::{Error, Result};

/// One row per step: `t, K, L, K̂ direct, K̂ via Buscher, L̂ direct, L̂ via Buscher`.
#[derive(Clone, Debug)]
pub struct CommutationReport {
    pub rows: Vec<[f64; 7]>,
    pub max_deviation: f64,
}

impl CommutationReport {
    pub const HEADER: &'static str = "t,K,L,K_dual_direct,K_dual_via_buscher,L_dual_direct,L_dual_via_buscher";

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(w, "{}", Self::HEADER)?;
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(|v| format!("{v:.17e}")).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }
}

fn path_or_stop(path: OdePath) -> Result<OdePath> {
    match path.stopped {
        Some(reason) => Err(Error::FlowStopped {
            t: path.t.last().copied().unwrap_or(0.0),
            reason,
        }),
        None => Ok(path),
    }
}

/// Flows the Hopf circle-bundle system `(K, L)` and its dual `(K̂, L̂)` side by
/// side and compares the dual flow with the Buscher image of the primal flow.
pub fn flow_commutation_check(k0: f64, l0: f64, a: f64, dt: f64, t_end: f64) -> Result<CommutationReport> {
    if !(dt > 0.0) {
        return Err(Error::NonPositive { name: "dt", value: dt });
    }
    if !(t_end >= 0.0) {
        return Err(Error::InvalidInput(format!("t_end must be nonnegative, got {t_end}")));
    }
    let start = buscher_dual(&CircleBundleData::warped(k0, l0, 2)?)?;
    let (primal, dual) = std::thread::scope(|s| {
        let p = s.spawn(|| {
            rk4_path(
                |y| circle_bundle_rhs(y[0], y[1], a).map(|(dk, dl)| vec![dk, dl]),
                &[k0, l0],
                dt,
                t_end,
            )
        });
        let d = s.spawn(|| {
            rk4_path(
                |y| circle_bundle_dual_rhs(y[0], y[1], a).map(|(dk, dl)| vec![dk, dl]),
                &[start.g0, start.g2[(0, 0)]],
                dt,
                t_end,
            )
        });
        (p.join().expect("primal trajectory panicked"), d.join().expect("dual trajectory panicked"))
    });
    let (primal, dual) = (path_or_stop(primal)?, path_or_stop(dual)?);

    let mut rows = Vec::with_capacity(primal.t.len());
    let mut max_deviation: f64 = 0.0;
    for ((t, y), yd) in primal.t.iter().zip(&primal.y).zip(&dual.y) {
        let pushed = buscher_dual(&CircleBundleData::warped(y[0], y[1], 2)?)?;
        let (kv, lv) = (pushed.g0, pushed.g2[(0, 0)]);
        max_deviation = max_deviation.max((kv - yd[0]).abs()).max((lv - yd[1]).abs());
        rows.push([*t, y[0], y[1], yd[0], kv, yd[1], lv]);
    }
    Ok(CommutationReport { rows, max_deviation })
}

/// Curvature of the self-dual Hopf example on `SU(2)×U(1)` and its T-dual.
#[derive(Clone, Debug)]
pub struct ExchangeReport {
    pub k: f64,
    pub x: f64,
    /// `max |Rc±|` for the primal closed pair.
    pub primal_ricci: f64,
    /// `R − 1/12|H|² − d*φ − ¼|φ|²` for the primal closed pair.
    pub primal_scalar: f64,
    pub primal_scalar_pm: (f64, f64),
    /// Distance between the Buscher image and the closed-form dual metric.
    pub dual_metric_error: f64,
    /// `max |φ̂ − ψ(φ)|`; the fiber volumes are constant on the base.
    pub dilaton_shift: f64,
    pub dual_ricci: f64,
    pub dual_scalar_pm: (f64, f64),
    /// `max |Rc±|` after `ĝ₁₁ → k + 0.1`.
    pub perturbed_ricci: f64,
}

impl ExchangeReport {
    pub fn ricci_flat(&self, tol: f64) -> bool {
        self.primal_ricci < tol && self.dual_ricci < tol
    }

    pub fn scalar_flat(&self, tol: f64) -> bool {
        [
            self.primal_scalar,
            self.primal_scalar_pm.0,
            self.primal_scalar_pm.1,
            self.dual_scalar_pm.0,
            self.dual_scalar_pm.1,
        ]
        .iter()
        .all(|s| s.abs() < tol)
    }

    pub fn detects_perturbation(&self, threshold: f64) -> bool {
        self.perturbed_ricci > threshold
    }

    /// Largest violation among the unperturbed checks.
    pub fn max_residual(&self) -> f64 {
        [
            self.primal_ricci,
            self.primal_scalar.abs(),
            self.primal_scalar_pm.0.abs(),
            self.primal_scalar_pm.1.abs(),
            self.dual_metric_error,
            self.dilaton_shift,
            self.dual_ricci,
            self.dual_scalar_pm.0.abs(),
            self.dual_scalar_pm.1.abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn ricci_residual(frame: &LieFrame, g: &InvariantMetric, h: &ThreeForm, div: &DivergenceData) -> Result<f64> {
    let (p, m) = generalized_ricci(frame, g, h, div)?;
    Ok(p.amax().max(m.amax()))
}

/// Primal data on `su(2)⊕ℝ`: `g = k(e¹²+e²²+e³²+x²e⁴²)`, `H = −k e¹²³`, divergence
/// covector `φ = −x e⁴`. The `e⁴` circle is dualized by the Buscher rules; the
/// `e¹` circle is self-dual with `ĝ₁₁ = k`. The dual divergence is the vector `−x ê₄`.
pub fn einstein_exchange_check(k: f64, x: f64) -> Result<ExchangeReport> {
    for (name, v) in [("k", k), ("x", x)] {
        if !(v > 0.0) {
            return Err(Error::NonPositive { name, value: v });
        }
    }
    let frame = LieFrame::su2_plus_r();
    let h = ThreeForm::basis(4, 0, 1, 2, -k)?;
    let g = InvariantMetric::diagonal(&[k, k, k, k * x * x])?;
    let phi = DVector::from_vec(vec![0.0, 0.0, 0.0, -x]);

    let primal_div = DivergenceData::from_covector(&phi);
    let primal_ricci = ricci_residual(&frame, &g, &h, &primal_div)?;
    let primal_scalar = generalized_scalar(&frame, &g, &h, &phi)?;
    let primal_scalar_pm = generalized_scalar_pm(&frame, &g, &h, &primal_div)?;

    // e⁴ fiber over the base spanned by e₁, e₂, e₃
    let fiber = CircleBundleData::new(
        k * x * x,
        DVector::zeros(3),
        g.matrix().view((0, 0), (3, 3)).into_owned(),
        DVector::zeros(3),
        TwoForm::zeros(3),
    )?;
    let dual = buscher_dual(&fiber)?;
    let mut g_hat = g.matrix().clone();
    g_hat.view_mut((0, 0), (3, 3)).copy_from(&dual.g2);
    g_hat[(3, 3)] = dual.g0;
    let expected = nalgebra::DMatrix::from_diagonal(&DVector::from_vec(vec![k, k, k, k / (k * x).powi(2)]));
    let dual_metric_error = (&g_hat - expected).amax();
    let g_hat = InvariantMetric::new(g_hat)?;

    let nu = VerticalDensity::constant(k * x)?;
    let nu_hat = VerticalDensity::constant(1.0 / x)?;
    let shifted = dilaton_shift(&[-x], &nu, &nu_hat, 1.0)?;
    let dilaton_shift = (shifted[0] + x).abs();

    let e_hat = GeneralizedVector::tangent(DVector::from_vec(vec![0.0, 0.0, 0.0, shifted[0]]));
    let gm = generalized_metric(g_hat.matrix(), &TwoForm::zeros(4))?;
    let dual_div = DivergenceData::from_element(&gm, &e_hat)?;
    let dual_ricci = ricci_residual(&frame, &g_hat, &h, &dual_div)?;
    let dual_scalar_pm = generalized_scalar_pm(&frame, &g_hat, &h, &dual_div)?;

    let mut perturbed = g_hat.matrix().clone();
    perturbed[(0, 0)] = k + 0.1;
    let perturbed_ricci = ricci_residual(&frame, &InvariantMetric::new(perturbed)?, &h, &dual_div)?;

    Ok(ExchangeReport {
        k,
        x,
        primal_ricci,
        primal_scalar,
        primal_scalar_pm,
        dual_metric_error,
        dilaton_shift,
        dual_ricci,
        dual_scalar_pm,
        perturbed_ricci,
    })
}
