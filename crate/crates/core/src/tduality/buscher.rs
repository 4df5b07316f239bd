use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::courant::{matrix_to_rows, rows_to_matrix, TwoForm};
use crate::{Error, Result};

/// `g = g₀ θ⊗θ + g₁⊗θ + θ⊗g₁ + g₂` and `b = b₁∧θ + b₂` at a point of the base.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleBundleData {
    pub g0: f64,
    pub g1: DVector<f64>,
    pub g2: DMatrix<f64>,
    pub b1: DVector<f64>,
    pub b2: TwoForm,
}

#[derive(Serialize, Deserialize)]
struct Raw {
    base_dim: usize,
    g0: f64,
    g1: Vec<f64>,
    g2: Vec<Vec<f64>>,
    b1: Vec<f64>,
    b2: Vec<Vec<f64>>,
}

impl CircleBundleData {
    pub fn new(g0: f64, g1: DVector<f64>, g2: DMatrix<f64>, b1: DVector<f64>, b2: TwoForm) -> Result<Self> {
        let m = g2.nrows();
        for d in [g2.ncols(), g1.len(), b1.len(), b2.dim()] {
            if d != m {
                return Err(Error::DimensionMismatch { expected: m, got: d });
            }
        }
        if !(g0 > 0.0) {
            return Err(Error::NonPositive { name: "g0", value: g0 });
        }
        if (&g2 - g2.transpose()).amax() > 1e-12 * 1.0_f64.max(g2.amax()) {
            return Err(Error::InvalidInput("g2 must be symmetric".into()));
        }
        let data = Self { g0, g1, g2, b1, b2 };
        if data.assembled_metric().cholesky().is_none() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(data)
    }

    /// Fiber length `K`, base `L·Id_m`, no mixing and no B-field.
    pub fn warped(k: f64, l: f64, m: usize) -> Result<Self> {
        Self::new(
            k,
            DVector::zeros(m),
            DMatrix::identity(m, m) * l,
            DVector::zeros(m),
            TwoForm::zeros(m),
        )
    }

    pub fn base_dim(&self) -> usize {
        self.g2.nrows()
    }

    /// Metric in the `(θ, base)` coframe.
    pub fn assembled_metric(&self) -> DMatrix<f64> {
        let m = self.base_dim();
        let mut g = DMatrix::zeros(m + 1, m + 1);
        g[(0, 0)] = self.g0;
        for i in 0..m {
            g[(0, i + 1)] = self.g1[i];
            g[(i + 1, 0)] = self.g1[i];
        }
        g.view_mut((1, 1), (m, m)).copy_from(&self.g2);
        g
    }

    /// `b` in the `(θ, base)` coframe; `b(e_θ, Y) = −b₁(Y)`.
    pub fn assembled_b(&self) -> TwoForm {
        let m = self.base_dim();
        TwoForm::from_upper(m + 1, |i, j| {
            if i == 0 {
                -self.b1[j - 1]
            } else {
                self.b2.get(i - 1, j - 1)
            }
        })
    }

    /// Metric induced on the base, `h = g₂ − g₁g₁ᵀ/g₀`.
    pub fn base_metric(&self) -> DMatrix<f64> {
        &self.g2 - &self.g1 * self.g1.transpose() / self.g0
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            (self.g0 - other.g0).abs(),
            (&self.g1 - &other.g1).amax(),
            (&self.g2 - &other.g2).amax(),
            (&self.b1 - &other.b1).amax(),
            (self.b2.matrix() - other.b2.matrix()).amax(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn to_toml(&self) -> Result<String> {
        let raw = Raw {
            base_dim: self.base_dim(),
            g0: self.g0,
            g1: self.g1.iter().copied().collect(),
            g2: matrix_to_rows(&self.g2),
            b1: self.b1.iter().copied().collect(),
            b2: matrix_to_rows(self.b2.matrix()),
        };
        toml::to_string(&raw).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: Raw = toml::from_str(text)?;
        let m = raw.base_dim;
        if raw.g1.len() != m || raw.b1.len() != m {
            return Err(Error::Parse(format!("g1 and b1 must have length {m}")));
        }
        Self::new(
            raw.g0,
            DVector::from_vec(raw.g1),
            rows_to_matrix(&raw.g2, m, "g2")?,
            DVector::from_vec(raw.b1),
            TwoForm::from_matrix(rows_to_matrix(&raw.b2, m, "b2")?)?,
        )
    }
}

/// Buscher rules:
/// `ĝ₀ = 1/g₀`, `ĝ₁ = −b₁/g₀`, `ĝ₂ = g₂ + (b₁b₁ᵀ − g₁g₁ᵀ)/g₀`,
/// `b̂₁ = −g₁/g₀`, `b̂₂ = b₂ + (g₁∧b₁)/g₀`.
pub fn buscher_dual(d: &CircleBundleData) -> Result<CircleBundleData> {
    if !(d.g0 > 0.0) {
        return Err(Error::NonPositive {
            name: "g0",
            value: d.g0,
        });
    }
    let inv = 1.0 / d.g0;
    let g2 = &d.g2 + (&d.b1 * d.b1.transpose() - &d.g1 * d.g1.transpose()) * inv;
    let wedge = &d.g1 * d.b1.transpose() - &d.b1 * d.g1.transpose();
    let b2 = TwoForm::from_matrix(d.b2.matrix() + wedge * inv)?;
    CircleBundleData::new(inv, -&d.b1 * inv, (&g2 + g2.transpose()) * 0.5, -&d.g1 * inv, b2)
}
