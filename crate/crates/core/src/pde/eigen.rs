use super::grid::PeriodicGrid;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct EigenConfig {
    /// Stop when `‖Aw − λBw‖ < tol` for `wᵀBw = 1`.
    pub tol: f64,
    pub max_iter: usize,
    /// Relative residual for the inner conjugate-gradient solves.
    pub cg_tol: f64,
    /// Move the shift toward the Rayleigh quotient between iterations.
    pub rayleigh: bool,
}

impl Default for EigenConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 500,
            cg_tol: 1e-13,
            rayleigh: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EigenResult {
    pub lambda: f64,
    /// Positive, normalized by `wᵀBw = 1`.
    pub ground: PeriodicGrid,
    pub residual: f64,
    pub iterations: usize,
    /// Times an accelerated shift was abandoned for the safe one.
    pub fallbacks: usize,
}

struct Operator<'a> {
    grid: &'a PeriodicGrid,
    v: &'a [f64],
    w: Option<&'a [f64]>,
}

impl Operator<'_> {
    fn weight(&self, k: usize) -> f64 {
        self.w.map_or(1.0, |w| w[k])
    }

    /// `(−4Δ + V − σB) x`.
    fn apply(&self, x: &[f64], sigma: f64) -> Vec<f64> {
        let lap = self.grid.with_values(x.to_vec()).map(|g| g.laplacian()).unwrap_or_else(|_| vec![f64::NAN; x.len()]);
        (0..x.len())
            .map(|k| -4.0 * lap[k] + (self.v[k] - sigma * self.weight(k)) * x[k])
            .collect()
    }

    fn b_dot(&self, x: &[f64], y: &[f64]) -> f64 {
        (0..x.len()).map(|k| self.weight(k) * x[k] * y[k]).sum()
    }
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Conjugate gradients; `None` on negative curvature or stagnation.
fn cg(op: &Operator, sigma: f64, rhs: &[f64], tol: f64, max_iter: usize) -> Option<Vec<f64>> {
    let mut x = vec![0.0; rhs.len()];
    let mut r = rhs.to_vec();
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    let target = tol * tol * rr;
    for _ in 0..max_iter {
        if rr <= target {
            return Some(x);
        }
        let ap = op.apply(&p, sigma);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return None;
        }
        let alpha = rr / pap;
        for k in 0..x.len() {
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        rr = rr_new;
        for k in 0..p.len() {
            p[k] = r[k] + beta * p[k];
        }
    }
    (rr <= 1e4 * target).then_some(x)
}

pub fn lambda_eigen(v: &PeriodicGrid) -> Result<EigenResult> {
    lambda_eigen_with(v, None, &EigenConfig::default())
}

/// Lowest eigenvalue of `(−4Δ + V) w = λ B w` with `B = diag(weight)` (identity
/// when absent), by shifted inverse iteration from the constant vector.
pub fn lambda_eigen_with(v: &PeriodicGrid, weight: Option<&PeriodicGrid>, cfg: &EigenConfig) -> Result<EigenResult> {
    if let Some(w) = weight {
        if w.len() != v.len() || w.n() != v.n() {
            return Err(Error::DimensionMismatch {
                expected: v.len(),
                got: w.len(),
            });
        }
        if w.inf() <= 0.0 {
            return Err(Error::NonPositive {
                name: "weight",
                value: w.inf(),
            });
        }
    }
    let op = Operator {
        grid: v,
        v: v.values(),
        w: weight.map(|w| w.values()),
    };
    let n = v.len();
    // −4Δ ≥ 0, so V − σB ≥ B makes the shifted operator positive definite
    let safe = (0..n).map(|k| op.v[k] / op.weight(k)).fold(f64::INFINITY, f64::min) - 1.0;

    let normalize = |x: Vec<f64>| -> Vec<f64> {
        let s = op.b_dot(&x, &x).sqrt();
        let sign = if x.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
        x.into_iter().map(|c| sign * c / s).collect()
    };
    let rayleigh = |x: &[f64]| -> (f64, f64) {
        let ax = op.apply(x, 0.0);
        let rho = dot(x, &ax);
        let res: f64 = (0..n)
            .map(|k| (ax[k] - rho * op.weight(k) * x[k]).powi(2))
            .sum::<f64>()
            .sqrt();
        (rho, res)
    };

    let mut x = normalize(vec![1.0; n]);
    let (mut rho, mut res) = rayleigh(&x);
    let mut fallbacks = 0;
    let mut sigma = safe;
    for it in 0..=cfg.max_iter {
        if res < cfg.tol {
            return Ok(EigenResult {
                lambda: rho,
                ground: v.with_values(x)?,
                residual: res,
                iterations: it,
                fallbacks,
            });
        }
        if it == cfg.max_iter {
            break;
        }
        let rhs: Vec<f64> = (0..n).map(|k| op.weight(k) * x[k]).collect();
        let solved = match cg(&op, sigma, &rhs, cfg.cg_tol, 20 * n) {
            Some(y) => Some(y),
            None if sigma != safe => {
                fallbacks += 1;
                sigma = safe;
                cg(&op, sigma, &rhs, cfg.cg_tol, 20 * n)
            }
            None => None,
        };
        let Some(y) = solved else {
            return Err(Error::NoConvergence {
                iterations: it,
                residual: res,
            });
        };
        let y = normalize(y);
        let (r2, e2) = rayleigh(&y);
        if sigma != safe && (r2 > rho + 1e-8 * (1.0 + rho.abs()) || e2 > 10.0 * res) {
            // the accelerated shift drifted toward another eigenvalue
            fallbacks += 1;
            sigma = safe;
            continue;
        }
        x = y;
        rho = r2;
        res = e2;
        if cfg.rayleigh {
            sigma = (rho - 2.0 * res).max(safe);
        }
    }
    Err(Error::NoConvergence {
        iterations: cfg.max_iter,
        residual: res,
    })
}

/// λ for the flat-torus Kähler potential `u`: the metric is `F g₀` with
/// `F = 1 + ½Δu`, so `−4Δ_g + R = F⁻¹(−4Δ − Δ log F)` and `H = 0`.
pub fn krf_lambda(u: &PeriodicGrid) -> Result<EigenResult> {
    let f = u.with_values(u.laplacian().iter().map(|l| 1.0 + 0.5 * l).collect())?;
    if f.inf() <= 0.0 {
        let k = f.values().iter().position(|&v| v <= 0.0).unwrap_or(0);
        let (i, j) = f.node(k);
        return Err(Error::Admissibility {
            i,
            j,
            factor: f.values()[k],
        });
    }
    let logf = f.map(f64::ln)?;
    let v = u.with_values(logf.laplacian().iter().map(|l| -l).collect())?;
    lambda_eigen_with(&v, Some(&f), &EigenConfig::default())
}

/// Dense reference: smallest eigenvalue of `−4Δ + V` by a full symmetric
/// eigendecomposition. Limited to 1024 nodes.
pub fn lambda_dense(v: &PeriodicGrid) -> Result<f64> {
    let m = v.len();
    if m > 1024 {
        return Err(Error::InvalidInput(format!("dense reference limited to 1024 nodes, got {m}")));
    }
    let mut a = nalgebra::DMatrix::zeros(m, m);
    let mut e = vec![0.0; m];
    for k in 0..m {
        e[k] = 1.0;
        let lap = v.with_values(e.clone())?.laplacian();
        for (r, l) in lap.iter().enumerate() {
            a[(r, k)] = -4.0 * l;
        }
        a[(k, k)] += v.values()[k];
        e[k] = 0.0;
    }
    Ok(a.symmetric_eigen().eigenvalues.min())
}
