use nalgebra::{Cholesky, DMatrix, Dyn};

use crate::courant::{Form, LieFrame, ThreeForm};
use crate::{Error, Result};

/// A left-invariant metric, `g_{ij} = g(e_i, e_j)` in the frame.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantMetric {
    g: DMatrix<f64>,
    inv: DMatrix<f64>,
}

impl InvariantMetric {
    pub fn new(g: DMatrix<f64>) -> Result<Self> {
        if !g.is_square() {
            return Err(Error::InvalidInput("metric must be square".into()));
        }
        let asym = (&g - g.transpose()).amax();
        if asym > 1e-12 * 1.0_f64.max(g.amax()) || !g.iter().all(|v| v.is_finite()) {
            return Err(Error::NotPositiveDefinite);
        }
        let g = (&g + g.transpose()) * 0.5;
        let chol: Cholesky<f64, Dyn> = g.clone().cholesky().ok_or(Error::NotPositiveDefinite)?;
        let inv = chol.inverse();
        Ok(Self { g, inv })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            g: DMatrix::identity(n, n),
            inv: DMatrix::identity(n, n),
        }
    }

    pub fn diagonal(d: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(d)))
    }

    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.g
    }

    pub fn inverse(&self) -> &DMatrix<f64> {
        &self.inv
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.g[(i, j)]
    }

    #[inline]
    pub fn inv(&self, i: usize, j: usize) -> f64 {
        self.inv[(i, j)]
    }

    pub fn det(&self) -> f64 {
        self.g.determinant()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.g.clone().symmetric_eigen().eigenvalues.min()
    }

    /// `dV_g = √det(g) e^{1…n}`.
    pub fn volume_form(&self) -> Form {
        let n = self.dim();
        let idx: Vec<usize> = (0..n).collect();
        let e = Form::basis(n, &idx).expect("valid indices");
        &e * self.det().sqrt()
    }

    /// `dV_g` as a three-form; only meaningful for `n = 3`.
    pub fn volume_three_form(&self) -> Result<ThreeForm> {
        if self.dim() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                got: self.dim(),
            });
        }
        ThreeForm::basis(3, 0, 1, 2, self.det().sqrt())
    }

    /// `|α|²_g` for a covector.
    pub fn covector_norm2(&self, a: &nalgebra::DVector<f64>) -> f64 {
        (a.transpose() * &self.inv * a)[(0, 0)]
    }
}

/// The bi-invariant three-form `H(X,Y,Z) = g([X,Y],Z)`.
pub fn cartan_three_form(frame: &LieFrame, g: &InvariantMetric) -> ThreeForm {
    let n = frame.dim();
    let val = |i: usize, j: usize, k: usize| (0..n).map(|m| frame.c(i, j, m) * g.get(m, k)).sum::<f64>();
    ThreeForm::from_upper(n, val)
}
