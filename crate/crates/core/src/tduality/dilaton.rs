use crate::{Error, Result};

/// `log ν` with `ν = |det g_V|^{1/2}`, sampled on a uniform base grid.
/// A single sample means the density is constant on the base.
#[derive(Clone, Debug, PartialEq)]
pub struct VerticalDensity {
    log_nu: Vec<f64>,
}

impl VerticalDensity {
    pub fn from_log_nu(log_nu: Vec<f64>) -> Result<Self> {
        if log_nu.is_empty() || log_nu.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("vertical density must be finite and nonempty".into()));
        }
        Ok(Self { log_nu })
    }

    /// From samples of `log|det g_V|`.
    pub fn from_logdet(logdet: &[f64]) -> Result<Self> {
        Self::from_log_nu(logdet.iter().map(|v| 0.5 * v).collect())
    }

    pub fn constant(nu: f64) -> Result<Self> {
        if !(nu > 0.0) {
            return Err(Error::NonPositive { name: "nu", value: nu });
        }
        Self::from_log_nu(vec![nu.ln()])
    }

    /// The fiber volume of the dual, `|det ĝ_V| = |det g_V|⁻¹`.
    pub fn dual(&self) -> Self {
        Self {
            log_nu: self.log_nu.iter().map(|v| -v).collect(),
        }
    }

    pub fn log_nu(&self) -> &[f64] {
        &self.log_nu
    }

    /// `d log ν` with second-order differences (one-sided at the ends).
    fn differential(&self, spacing: f64, len: usize) -> Vec<f64> {
        let f = &self.log_nu;
        if f.len() == 1 {
            return vec![0.0; len];
        }
        let n = f.len();
        (0..n)
            .map(|i| {
                if n == 2 {
                    (f[1] - f[0]) / spacing
                } else if i == 0 {
                    (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * spacing)
                } else if i == n - 1 {
                    (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * spacing)
                } else {
                    (f[i + 1] - f[i - 1]) / (2.0 * spacing)
                }
            })
            .collect()
    }
}

/// `φ̂ = φ + 2 d log(ν̂/ν)` on a one-dimensional base with grid spacing `spacing`.
pub fn dilaton_shift(phi: &[f64], nu: &VerticalDensity, nu_hat: &VerticalDensity, spacing: f64) -> Result<Vec<f64>> {
    for d in [nu.log_nu.len(), nu_hat.log_nu.len()] {
        if d != 1 && d != phi.len() {
            return Err(Error::DimensionMismatch {
                expected: phi.len(),
                got: d,
            });
        }
    }
    if !(spacing > 0.0) {
        return Err(Error::NonPositive {
            name: "spacing",
            value: spacing,
        });
    }
    let dn = nu.differential(spacing, phi.len());
    let dh = nu_hat.differential(spacing, phi.len());
    Ok(phi
        .iter()
        .zip(dn.iter().zip(&dh))
        .map(|(p, (a, b))| p + 2.0 * (b - a))
        .collect())
}

/// Homogeneous case: the shift vanishes and `φ̂ = φ`.
pub fn dilaton_shift_constant(phi: &[f64]) -> Vec<f64> {
    phi.to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_density_has_no_shift() {
        let nu = VerticalDensity::constant(2.0).unwrap();
        let phi = vec![0.3, -1.0, 2.0];
        assert_eq!(dilaton_shift(&phi, &nu, &nu.dual(), 0.1).unwrap(), phi);
        assert_eq!(dilaton_shift_constant(&phi), phi);
    }

    #[test]
    fn exponential_density_shifts_by_minus_four() {
        for n in [21usize, 41, 81] {
            let h = 1.0 / (n - 1) as f64;
            let s: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
            let nu = VerticalDensity::from_log_nu(s.clone()).unwrap();
            let out = dilaton_shift(&vec![0.0; n], &nu, &nu.dual(), h).unwrap();
            assert!(out.iter().all(|v| (v + 4.0).abs() < 1e-12));
        }
    }

    #[test]
    fn second_order_on_curved_density() {
        let err = |n: usize| {
            let h = 1.0 / (n - 1) as f64;
            let logdet: Vec<f64> = (0..n).map(|i| (i as f64 * h).sin()).collect();
            let nu = VerticalDensity::from_logdet(&logdet).unwrap();
            let out = dilaton_shift(&vec![1.0; n], &nu, &nu.dual(), h).unwrap();
            // φ̂ = φ − 2 d log|det g_V|
            (0..n)
                .map(|i| (out[i] - (1.0 - 2.0 * (i as f64 * h).cos())).abs())
                .fold(0.0, f64::max)
        };
        let ratio = err(41) / err(81);
        assert!(ratio > 3.5, "{ratio}");
    }
}
