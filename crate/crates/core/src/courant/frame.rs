//! Invariant frames of a Lie algebra and the Chevalley–Eilenberg differential.
//!
//! Structure constants are stored as `c^k_{ij}` with `[e_i, e_j] = Σ_k c^k_{ij} e_k`.
//! The invariant coframe satisfies `de^k(e_i, e_j) = −e^k([e_i, e_j]) = −c^k_{ij}`.

use nalgebra::{DMatrix, DVector};

use super::forms::{Form, TwoForm};
use crate::tensor::{idx3, max_abs, multi_indices};
use crate::{Error, Result};

/// `[e_i, e_j] = Σ coef·e_k` given as `(i, j, &[(k, coef)])`.
pub type Bracket<'a> = (usize, usize, &'a [(usize, f64)]);

#[derive(Clone, Debug, PartialEq)]
pub struct LieFrame {
    dim: usize,
    c: Vec<f64>,
}

impl LieFrame {
    /// `c[idx]` holds `c^k_{ij}` at flat index `(i*n + j)*n + k`.
    pub fn new(dim: usize, c: Vec<f64>) -> Result<Self> {
        if c.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim * dim,
                got: c.len(),
            });
        }
        let mut defect = 0.0_f64;
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    defect = defect.max((c[idx3(dim, i, j, k)] + c[idx3(dim, j, i, k)]).abs());
                }
            }
        }
        if defect > 1e-12 * 1.0_f64.max(max_abs(&c)) {
            return Err(Error::NotAntisymmetric {
                what: "structure constants",
                defect,
            });
        }
        Ok(Self { dim, c })
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize, usize) -> f64) -> Result<Self> {
        let mut c = vec![0.0; dim * dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    c[idx3(dim, i, j, k)] = f(i, j, k);
                }
            }
        }
        Self::new(dim, c)
    }

    /// Builds a frame from brackets `[e_i, e_j] = Σ coef·e_k`, given for `i < j`.
    pub fn from_brackets(dim: usize, brackets: &[Bracket]) -> Result<Self> {
        let mut c = vec![0.0; dim * dim * dim];
        for &(i, j, terms) in brackets {
            if i >= dim || j >= dim || i == j {
                return Err(Error::InvalidInput(format!("bad bracket pair ({i}, {j})")));
            }
            for &(k, v) in terms {
                if k >= dim {
                    return Err(Error::InvalidInput(format!("bracket target {k} out of range")));
                }
                c[idx3(dim, i, j, k)] += v;
                c[idx3(dim, j, i, k)] -= v;
            }
        }
        Self::new(dim, c)
    }

    /// Recovers the frame from the differentials of its dual coframe.
    pub fn from_differentials(des: &[TwoForm]) -> Result<Self> {
        let n = des.len();
        if let Some(bad) = des.iter().find(|d| d.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bad.dim(),
            });
        }
        Self::from_fn(n, |i, j, k| -des[k].get(i, j))
    }

    pub fn abelian(n: usize) -> Self {
        Self {
            dim: n,
            c: vec![0.0; n * n * n],
        }
    }

    /// su(2) with `de¹ = e²³` (cyclic), i.e. `[e₂, e₃] = −e₁`.
    pub fn su2() -> Self {
        Self::cyclic3(-1.0)
    }

    /// Milnor frame on SU(2): `[X₁, X₂] = −2X₃` (cyclic).
    pub fn milnor() -> Self {
        Self::cyclic3(-2.0)
    }

    fn cyclic3(s: f64) -> Self {
        Self::from_brackets(3, &[(1, 2, &[(0, s)]), (2, 0, &[(1, s)]), (0, 1, &[(2, s)])])
            .expect("static frame")
    }

    /// `su(2) ⊕ ℝ` with the extra direction last.
    pub fn su2_plus_r() -> Self {
        Self::su2().direct_sum(&Self::abelian(1))
    }

    /// The solvable frame `[e_n, e_i] = e_i` (i < n); orthonormal gives hyperbolic space.
    pub fn hyperbolic(n: usize) -> Self {
        assert!(n >= 2);
        let last = n - 1;
        Self::from_fn(n, |i, j, k| {
            if i == last && j == k && j != last {
                1.0
            } else if j == last && i == k && i != last {
                -1.0
            } else {
                0.0
            }
        })
        .expect("static frame")
    }

    pub fn direct_sum(&self, other: &LieFrame) -> LieFrame {
        let (p, q) = (self.dim, other.dim);
        let n = p + q;
        let mut c = vec![0.0; n * n * n];
        for i in 0..p {
            for j in 0..p {
                for k in 0..p {
                    c[idx3(n, i, j, k)] = self.c(i, j, k);
                }
            }
        }
        for i in 0..q {
            for j in 0..q {
                for k in 0..q {
                    c[idx3(n, p + i, p + j, p + k)] = other.c(i, j, k);
                }
            }
        }
        LieFrame { dim: n, c }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `c^k_{ij}`.
    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[idx3(self.dim, i, j, k)]
    }

    pub fn structure_constants(&self) -> &[f64] {
        &self.c
    }

    pub fn bracket(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let n = self.dim;
        let mut out = DVector::zeros(n);
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let w = x[i] * y[j];
                if w == 0.0 {
                    continue;
                }
                for k in 0..n {
                    out[k] += w * self.c(i, j, k);
                }
            }
        }
        out
    }

    /// Matrix of `ad_X`: column `j` is `[X, e_j]`.
    pub fn ad(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let n = self.dim;
        DMatrix::from_fn(n, n, |k, j| (0..n).map(|i| x[i] * self.c(i, j, k)).sum())
    }

    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut s = 0.0;
                        for m in 0..n {
                            s += self.c(i, j, m) * self.c(m, k, l)
                                + self.c(j, k, m) * self.c(m, i, l)
                                + self.c(k, i, m) * self.c(m, j, l);
                        }
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// `max_i |tr ad_{e_i}|`; zero exactly for unimodular algebras.
    pub fn unimodularity_defect(&self) -> f64 {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|k| self.c(i, k, k)).sum::<f64>().abs())
            .fold(0.0, f64::max)
    }

    /// `(dα)(X₀,…,X_k) = Σ_{i<j} (−1)^{i+j} α([X_i,X_j], X₀,…,X̂_i,…,X̂_j,…)`.
    pub fn exterior_d(&self, form: &Form) -> Result<Form> {
        let n = self.dim;
        if form.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: form.dim(),
            });
        }
        let k = form.degree();
        let mut data = vec![0.0; n.pow(k as u32 + 1)];
        if k == 0 {
            return Form::from_components(n, 1, data);
        }
        let mut rest = vec![0; k];
        for (flat, idx) in multi_indices(n, k + 1).enumerate() {
            let mut acc = 0.0;
            for a in 0..=k {
                for b in a + 1..=k {
                    let sign = if (a + b) % 2 == 0 { 1.0 } else { -1.0 };
                    let mut r = 1;
                    for (s, &v) in idx.iter().enumerate() {
                        if s != a && s != b {
                            rest[r] = v;
                            r += 1;
                        }
                    }
                    for m in 0..n {
                        let cm = self.c(idx[a], idx[b], m);
                        if cm == 0.0 {
                            continue;
                        }
                        rest[0] = m;
                        acc += sign * cm * form.get(&rest);
                    }
                }
            }
            data[flat] = acc;
        }
        Ok(Form::antisymmetrize(n, k + 1, data))
    }

    /// `de^k` for every coframe element.
    pub fn coframe_differentials(&self) -> Vec<TwoForm> {
        let n = self.dim;
        (0..n)
            .map(|k| TwoForm::from_upper(n, |i, j| -self.c(i, j, k)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su2_convention() {
        let f = LieFrame::su2();
        let de = f.coframe_differentials();
        assert_eq!(de[0], TwoForm::basis(3, 1, 2));
        assert_eq!(de[1], TwoForm::basis(3, 2, 0));
        let e1 = Form::basis(3, &[0]).unwrap();
        assert_eq!(f.exterior_d(&e1).unwrap(), TwoForm::basis(3, 1, 2).to_form());
        assert_eq!(LieFrame::from_differentials(&de).unwrap(), f);
    }

    #[test]
    fn milnor_brackets() {
        let f = LieFrame::milnor();
        let x1 = DVector::from_vec(vec![1.0, 0.0, 0.0]);
        let x2 = DVector::from_vec(vec![0.0, 1.0, 0.0]);
        assert_eq!(f.bracket(&x1, &x2).as_slice(), &[0.0, 0.0, -2.0]);
        assert_eq!(f.jacobi_residual(), 0.0);
    }

    #[test]
    fn hyperbolic_is_not_unimodular() {
        let f = LieFrame::hyperbolic(3);
        assert_eq!(f.jacobi_residual(), 0.0);
        assert_eq!(f.unimodularity_defect(), 2.0);
        assert_eq!(LieFrame::su2_plus_r().unimodularity_defect(), 0.0);
    }

    #[test]
    fn d_squared_vanishes_on_basis() {
        let f = LieFrame::su2_plus_r();
        for a in 0..4 {
            for b in 0..4 {
                let w = Form::basis(4, &[a, b]).unwrap();
                let dd = f.exterior_d(&f.exterior_d(&w).unwrap()).unwrap();
                assert!(dd.max_abs() < 1e-15);
            }
        }
    }

    #[test]
    fn ad_matches_bracket() {
        let f = LieFrame::milnor();
        let x = DVector::from_vec(vec![0.3, -1.0, 2.0]);
        let y = DVector::from_vec(vec![1.5, 0.2, -0.7]);
        assert!((f.ad(&x) * &y - f.bracket(&x, &y)).amax() < 1e-15);
    }
}
