//! Generalized vectors on `V ⊕ V*` and generalized metrics.

use nalgebra::{DMatrix, DVector};

use super::forms::TwoForm;
use crate::{Error, Result};

/// `X + ξ` with `X ∈ V` and `ξ ∈ V*`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedVector {
    x: DVector<f64>,
    xi: DVector<f64>,
}

impl GeneralizedVector {
    pub fn new(x: DVector<f64>, xi: DVector<f64>) -> Result<Self> {
        if x.len() != xi.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                got: xi.len(),
            });
        }
        Ok(Self { x, xi })
    }

    pub fn from_slices(x: &[f64], xi: &[f64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(x), DVector::from_column_slice(xi))
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            x: DVector::zeros(n),
            xi: DVector::zeros(n),
        }
    }

    pub fn tangent(x: DVector<f64>) -> Self {
        let n = x.len();
        Self {
            x,
            xi: DVector::zeros(n),
        }
    }

    pub fn cotangent(xi: DVector<f64>) -> Self {
        let n = xi.len();
        Self {
            x: DVector::zeros(n),
            xi,
        }
    }

    /// `e_i + 0`.
    pub fn e(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.x[i] = 1.0;
        v
    }

    /// `0 + e^i`.
    pub fn e_dual(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.xi[i] = 1.0;
        v
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &DVector<f64> {
        &self.x
    }

    pub fn xi(&self) -> &DVector<f64> {
        &self.xi
    }

    /// `(x, ξ)` stacked into a `2n` column.
    pub fn stacked(&self) -> DVector<f64> {
        let n = self.dim();
        DVector::from_fn(2 * n, |r, _| if r < n { self.x[r] } else { self.xi[r - n] })
    }

    pub fn from_stacked(v: &DVector<f64>) -> Result<Self> {
        if !v.len().is_multiple_of(2) {
            return Err(Error::InvalidInput("stacked vector has odd length".into()));
        }
        let n = v.len() / 2;
        Ok(Self {
            x: v.rows(0, n).into_owned(),
            xi: v.rows(n, n).into_owned(),
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.x.amax().max(self.xi.amax())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            x: &self.x * s,
            xi: &self.xi * s,
        }
    }
}

impl std::ops::Add for &GeneralizedVector {
    type Output = GeneralizedVector;
    fn add(self, rhs: &GeneralizedVector) -> GeneralizedVector {
        GeneralizedVector {
            x: &self.x + &rhs.x,
            xi: &self.xi + &rhs.xi,
        }
    }
}

impl std::ops::Sub for &GeneralizedVector {
    type Output = GeneralizedVector;
    fn sub(self, rhs: &GeneralizedVector) -> GeneralizedVector {
        GeneralizedVector {
            x: &self.x - &rhs.x,
            xi: &self.xi - &rhs.xi,
        }
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch {
            expected: a,
            got: b,
        });
    }
    Ok(())
}

/// `⟨X+ξ, Y+η⟩ = ½(ξ(Y) + η(X))`.
pub fn neutral_pair(a: &GeneralizedVector, b: &GeneralizedVector) -> Result<f64> {
    check_dims(a.dim(), b.dim())?;
    Ok(0.5 * (a.xi.dot(&b.x) + b.xi.dot(&a.x)))
}

/// Gram matrix of the neutral pairing on stacked `(x, ξ)` coordinates.
pub fn neutral_matrix(n: usize) -> DMatrix<f64> {
    let mut p = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        p[(i, n + i)] = 0.5;
        p[(n + i, i)] = 0.5;
    }
    p
}

/// `e^B(X + ξ) = X + ξ + i_X B`.
pub fn b_field_transform(b: &TwoForm, a: &GeneralizedVector) -> Result<GeneralizedVector> {
    check_dims(b.dim(), a.dim())?;
    Ok(GeneralizedVector {
        x: a.x.clone(),
        xi: &a.xi + b.contract(&a.x),
    })
}

/// Matrix of `e^B` on stacked coordinates.
pub fn b_field_matrix(b: &TwoForm) -> DMatrix<f64> {
    let n = b.dim();
    let mut m = DMatrix::identity(2 * n, 2 * n);
    m.view_mut((n, 0), (n, n)).copy_from(&b.matrix().transpose());
    m
}

/// The generalized metric `G(g, b)` as an endomorphism of `V ⊕ V*`.
#[derive(Clone, Debug)]
pub struct GeneralizedMetric {
    g: DMatrix<f64>,
    b: TwoForm,
    matrix: DMatrix<f64>,
}

/// Builds `G = e^b ∘ [[0, g⁻¹], [g, 0]] ∘ e^{−b}`.
pub fn generalized_metric(g: &DMatrix<f64>, b: &TwoForm) -> Result<GeneralizedMetric> {
    let n = g.nrows();
    if !g.is_square() {
        return Err(Error::InvalidInput("metric must be square".into()));
    }
    check_dims(n, b.dim())?;
    if (g - g.transpose()).amax() > 1e-12 * 1.0_f64.max(g.amax()) {
        return Err(Error::NotPositiveDefinite);
    }
    let chol = g.clone().cholesky().ok_or(Error::NotPositiveDefinite)?;
    let ginv = chol.inverse();
    let mut core = DMatrix::zeros(2 * n, 2 * n);
    core.view_mut((0, n), (n, n)).copy_from(&ginv);
    core.view_mut((n, 0), (n, n)).copy_from(g);
    let eb = b_field_matrix(b);
    let emb = b_field_matrix(&b.scaled(-1.0));
    Ok(GeneralizedMetric {
        g: g.clone(),
        b: b.clone(),
        matrix: eb * core * emb,
    })
}

impl GeneralizedMetric {
    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    pub fn g(&self) -> &DMatrix<f64> {
        &self.g
    }

    pub fn b(&self) -> &TwoForm {
        &self.b
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn apply(&self, a: &GeneralizedVector) -> Result<GeneralizedVector> {
        check_dims(self.dim(), a.dim())?;
        GeneralizedVector::from_stacked(&(&self.matrix * a.stacked()))
    }

    /// `max |G² − Id|`.
    pub fn involution_defect(&self) -> f64 {
        let n2 = 2 * self.dim();
        (&self.matrix * &self.matrix - DMatrix::identity(n2, n2)).amax()
    }

    /// `max |Gᵀ P G − P|` for the neutral Gram matrix `P`.
    pub fn orthogonality_defect(&self) -> f64 {
        let p = neutral_matrix(self.dim());
        (self.matrix.transpose() * &p * &self.matrix - p).amax()
    }

    /// Gram matrix of `(a, b) ↦ ⟨Ga, b⟩`.
    pub fn metric_form(&self) -> DMatrix<f64> {
        self.matrix.transpose() * neutral_matrix(self.dim())
    }

    /// Smallest eigenvalue of the symmetrized `⟨G·,·⟩`.
    pub fn min_metric_eigenvalue(&self) -> f64 {
        let m = self.metric_form();
        let sym = (&m + m.transpose()) * 0.5;
        sym.symmetric_eigen().eigenvalues.min()
    }

    /// Columns `e_i + (b ± g)e_i` spanning `V_±`, with `bX` meaning `i_X b`.
    pub fn eigenbundle_basis(&self, plus: bool) -> DMatrix<f64> {
        let n = self.dim();
        let s = if plus { 1.0 } else { -1.0 };
        let lower = self.b.matrix().transpose() + &self.g * s;
        let mut m = DMatrix::zeros(2 * n, n);
        m.view_mut((0, 0), (n, n)).fill_with_identity();
        m.view_mut((n, 0), (n, n)).copy_from(&lower);
        m
    }
}

/// `π_± a = ½(a ± Ga)`.
pub fn eigenbundle_projections(
    metric: &GeneralizedMetric,
    a: &GeneralizedVector,
) -> Result<(GeneralizedVector, GeneralizedVector)> {
    let ga = metric.apply(a)?;
    Ok(((a + &ga).scale(0.5), (a - &ga).scale(0.5)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_examples() {
        let n = 2;
        let a = &GeneralizedVector::e(n, 0) + &GeneralizedVector::e_dual(n, 0);
        assert_eq!(neutral_pair(&a, &a).unwrap(), 1.0);
        let e1 = GeneralizedVector::e(n, 0);
        let e2 = GeneralizedVector::e(n, 1);
        assert_eq!(neutral_pair(&e1, &e2).unwrap(), 0.0);
        let p = &GeneralizedVector::e(n, 0) + &GeneralizedVector::e_dual(n, 1);
        let q = &GeneralizedVector::e(n, 1) + &GeneralizedVector::e_dual(n, 0);
        assert_eq!(neutral_pair(&p, &q).unwrap(), 1.0);
        assert!(neutral_pair(&p, &GeneralizedVector::zeros(3)).is_err());
    }

    #[test]
    fn b_transform_of_e1() {
        let b = TwoForm::basis(2, 0, 1);
        let out = b_field_transform(&b, &GeneralizedVector::e(2, 0)).unwrap();
        let want = &GeneralizedVector::e(2, 0) + &GeneralizedVector::e_dual(2, 1);
        assert_eq!(out, want);
    }

    #[test]
    fn identity_metric_is_antidiagonal() {
        let g = DMatrix::identity(3, 3);
        let m = generalized_metric(&g, &TwoForm::zeros(3)).unwrap();
        let mut want = DMatrix::zeros(6, 6);
        for i in 0..3 {
            want[(i, 3 + i)] = 1.0;
            want[(3 + i, i)] = 1.0;
        }
        assert_eq!(m.matrix(), &want);
    }

    #[test]
    fn lower_left_block() {
        let g = DMatrix::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 1.0]);
        let b = TwoForm::basis(2, 0, 1).scaled(0.7);
        let m = generalized_metric(&g, &b).unwrap();
        let bm = b.matrix();
        let want = &g - bm * g.clone().try_inverse().unwrap() * bm;
        assert!((m.matrix().view((2, 0), (2, 2)) - want).amax() < 1e-14);
    }

    #[test]
    fn projections_of_e1() {
        let m = generalized_metric(&DMatrix::identity(2, 2), &TwoForm::zeros(2)).unwrap();
        let (p, q) = eigenbundle_projections(&m, &GeneralizedVector::e(2, 0)).unwrap();
        assert_eq!(p, GeneralizedVector::from_slices(&[0.5, 0.0], &[0.5, 0.0]).unwrap());
        assert_eq!(q, GeneralizedVector::from_slices(&[0.5, 0.0], &[-0.5, 0.0]).unwrap());
    }

    #[test]
    fn rejects_indefinite() {
        let g = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(matches!(
            generalized_metric(&g, &TwoForm::zeros(2)),
            Err(Error::NotPositiveDefinite)
        ));
    }
}
