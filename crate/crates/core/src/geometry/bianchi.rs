use super::connection::{bismut_connection, levi_civita, Connection, Sign};
use super::curvature::{codifferential_with, h_squared, riemann};
use super::metric::InvariantMetric;
use crate::courant::{LieFrame, ThreeForm};
use crate::tensor::{idx3, idx4};

/// Residuals of the Bismut curvature identities.
#[derive(Clone, Debug)]
pub struct BianchiReport {
    /// `max |R⁺(X,Y,Z,W) − R⁻(Z,W,X,Y)|`.
    pub pair_symmetry: f64,
    /// `max_i |(div H²)_i − ⅙∇_i|H|² + (d*H)^{mn}H_{imn}|`.
    pub div_h2: f64,
    /// First Bianchi identity with torsion, for `∇⁺` and `∇⁻`.
    pub first_bianchi_plus: f64,
    pub first_bianchi_minus: f64,
    pub dh: f64,
    pub unimodularity_defect: f64,
    /// Set when the suite refused to run.
    pub gate: Option<String>,
}

impl BianchiReport {
    pub fn max_residual(&self) -> f64 {
        self.pair_symmetry
            .max(self.div_h2)
            .max(self.first_bianchi_plus)
            .max(self.first_bianchi_minus)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.gate.is_none() && self.max_residual() <= tol
    }
}

pub fn bianchi_suite(frame: &LieFrame, g: &InvariantMetric, h: &ThreeForm) -> BianchiReport {
    let dh = frame.exterior_d(&h.to_form()).map(|f| f.max_abs()).unwrap_or(f64::NAN);
    let unimodularity_defect = frame.unimodularity_defect();
    let mut report = BianchiReport {
        pair_symmetry: f64::NAN,
        div_h2: f64::NAN,
        first_bianchi_plus: f64::NAN,
        first_bianchi_minus: f64::NAN,
        dh,
        unimodularity_defect,
        gate: None,
    };
    if unimodularity_defect > crate::DEFAULT_TOL {
        report.gate = Some(format!("frame is not unimodular (|tr ad| = {unimodularity_defect:.3e})"));
        return report;
    }
    if dh > crate::DEFAULT_TOL {
        log::warn!("Bianchi identities assume dH = 0; |dH| = {dh:.3e}");
    }
    let n = frame.dim();
    let plus = bismut_connection(frame, g, h, Sign::Plus);
    let minus = bismut_connection(frame, g, h, Sign::Minus);
    let rp = riemann(frame, g, &plus);
    let rm = riemann(frame, g, &minus);
    let mut pair = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    pair = pair.max((rp.get(i, j, k, l) - rm.get(k, l, i, j)).abs());
                }
            }
        }
    }
    report.pair_symmetry = pair;

    let lc = levi_civita(frame, g);
    let h2 = h_squared(g, h);
    let nh2 = lc.nabla_two(&h2);
    let dstar = codifferential_with(&lc, g, h);
    let ginv = g.inverse();
    let dstar_up = ginv * dstar.matrix() * ginv;
    let mut div = 0.0_f64;
    for i in 0..n {
        let mut s = 0.0;
        for j in 0..n {
            for k in 0..n {
                s += ginv[(j, k)] * nh2[idx3(n, j, k, i)];
            }
        }
        // |H|² is constant on invariant data
        for m in 0..n {
            for p in 0..n {
                s += dstar_up[(m, p)] * h.get(i, m, p);
            }
        }
        div = div.max(s.abs());
    }
    report.div_h2 = div;
    report.first_bianchi_plus = first_bianchi_residual(frame, g, &plus, rp.components());
    report.first_bianchi_minus = first_bianchi_residual(frame, g, &minus, rm.components());
    report
}

/// `Σ_cyc Rm(X,Y,Z,W) = Σ_cyc {g(T(T(X,Y),Z),W) + (∇_X T)(Y,Z,W)}` for a metric connection.
pub(crate) fn first_bianchi_residual(frame: &LieFrame, g: &InvariantMetric, conn: &Connection, rm: &[f64]) -> f64 {
    let n = frame.dim();
    let t_up = conn.torsion(frame);
    let mut t_low = vec![0.0; n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                t_low[idx3(n, a, b, c)] = (0..n).map(|k| t_up[idx3(n, a, b, k)] * g.get(k, c)).sum();
            }
        }
    }
    let nt = conn.nabla_three(&t_low);
    let tt = |x: usize, y: usize, z: usize, w: usize| -> f64 {
        (0..n).map(|m| t_up[idx3(n, x, y, m)] * t_low[idx3(n, m, z, w)]).sum()
    };
    let mut worst = 0.0_f64;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for w in 0..n {
                    let mut s = 0.0;
                    for (a, b, c) in [(x, y, z), (y, z, x), (z, x, y)] {
                        s += rm[idx4(n, a, b, c, w)] - tt(a, b, c, w) - nt[idx4(n, a, b, c, w)];
                    }
                    worst = worst.max(s.abs());
                }
            }
        }
    }
    worst
}
