//! Alternating multilinear forms on an `n`-dimensional space, stored densely.
//!
//! Wedge products use the alternating-sum normalization, so that
//! `(e¹∧e²∧e³)(e₁,e₂,e₃) = 1`. Interior products contract the first slot.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};

use crate::tensor::{idx3, max_abs, multi_indices, permutation_sign, permutations};
use crate::{Error, Result};

const ANTISYM_TOL: f64 = 1e-12;

/// A totally antisymmetric `k`-form with all `n^k` components stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Form {
    dim: usize,
    degree: usize,
    data: Vec<f64>,
}

impl Form {
    pub fn zeros(dim: usize, degree: usize) -> Self {
        Self {
            dim,
            degree,
            data: vec![0.0; dim.pow(degree as u32)],
        }
    }

    /// The basis form `e^{i₁…i_k}`.
    pub fn basis(dim: usize, indices: &[usize]) -> Result<Self> {
        if indices.iter().any(|&i| i >= dim) {
            return Err(Error::InvalidInput(format!(
                "basis index out of range for dimension {dim}: {indices:?}"
            )));
        }
        let mut f = Self::zeros(dim, indices.len());
        if permutation_sign(indices) == 0 {
            return Ok(f);
        }
        for (perm, sign) in permutations(indices.len()) {
            let idx: Vec<usize> = perm.iter().map(|&p| indices[p]).collect();
            let flat = f.flat(&idx);
            f.data[flat] = sign as f64;
        }
        Ok(f)
    }

    /// Builds a form from raw components, rejecting data that is not
    /// antisymmetric to machine precision.
    pub fn from_components(dim: usize, degree: usize, data: Vec<f64>) -> Result<Self> {
        let expected = dim.pow(degree as u32);
        if data.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: data.len(),
            });
        }
        let raw = Self { dim, degree, data };
        let defect = raw.antisymmetry_defect();
        let scale = 1.0_f64.max(max_abs(&raw.data));
        if defect > ANTISYM_TOL * scale {
            return Err(Error::NotAntisymmetric {
                what: "form",
                defect,
            });
        }
        if defect == 0.0 {
            return Ok(raw);
        }
        Ok(raw.antisymmetrized())
    }

    /// Projects arbitrary component data onto its alternating part.
    pub fn antisymmetrize(dim: usize, degree: usize, data: Vec<f64>) -> Self {
        Self { dim, degree, data }.antisymmetrized()
    }

    fn antisymmetrized(&self) -> Self {
        let perms = permutations(self.degree);
        let norm = perms.len() as f64;
        let mut out = Self::zeros(self.dim, self.degree);
        for idx in multi_indices(self.dim, self.degree) {
            let mut acc = 0.0;
            for (perm, sign) in &perms {
                let permuted: Vec<usize> = perm.iter().map(|&p| idx[p]).collect();
                acc += *sign as f64 * self.get(&permuted);
            }
            let flat = out.flat(&idx);
            out.data[flat] = acc / norm;
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> &[f64] {
        &self.data
    }

    fn flat(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        debug_assert_eq!(idx.len(), self.degree);
        self.data[self.flat(idx)]
    }

    /// Largest deviation from total antisymmetry over all transpositions of
    /// adjacent slots.
    pub fn antisymmetry_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        if self.degree < 2 {
            return 0.0;
        }
        for idx in multi_indices(self.dim, self.degree) {
            let v = self.get(&idx);
            for s in 0..self.degree - 1 {
                let mut sw = idx.clone();
                sw.swap(s, s + 1);
                worst = worst.max((v + self.get(&sw)).abs());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.data)
    }

    /// Evaluates the form on `degree` vectors.
    pub fn eval(&self, vectors: &[&DVector<f64>]) -> f64 {
        assert_eq!(vectors.len(), self.degree);
        let mut acc = 0.0;
        for idx in multi_indices(self.dim, self.degree) {
            let c = self.get(&idx);
            if c == 0.0 {
                continue;
            }
            let w: f64 = idx.iter().zip(vectors).map(|(&i, v)| v[i]).product();
            acc += c * w;
        }
        acc
    }

    /// `i_X α`, contracting the first slot.
    pub fn interior(&self, x: &[f64]) -> Result<Form> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        if self.degree == 0 {
            return Ok(Form::zeros(self.dim, 0));
        }
        let mut out = Form::zeros(self.dim, self.degree - 1);
        let stride = out.data.len();
        for (i, xi) in x.iter().enumerate() {
            if *xi == 0.0 {
                continue;
            }
            for (o, v) in out.data.iter_mut().zip(&self.data[i * stride..(i + 1) * stride]) {
                *o += xi * v;
            }
        }
        Ok(out)
    }

    /// `α ∧ β` with `(α∧β)(X…) = 1/(p!q!) Σ_σ sgn σ α(X_σ…) β(X_σ…)`.
    pub fn wedge(&self, other: &Form) -> Result<Form> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let (p, q) = (self.degree, other.degree);
        let k = p + q;
        let perms = permutations(k);
        let norm = (factorial(p) * factorial(q)) as f64;
        let mut out = Form::zeros(self.dim, k);
        for idx in multi_indices(self.dim, k) {
            if permutation_sign(&idx) == 0 {
                continue;
            }
            let mut acc = 0.0;
            for (perm, sign) in &perms {
                let permuted: Vec<usize> = perm.iter().map(|&s| idx[s]).collect();
                acc += *sign as f64 * self.get(&permuted[..p]) * other.get(&permuted[p..]);
            }
            let flat = out.flat(&idx);
            out.data[flat] = acc / norm;
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Form, f: impl Fn(f64, f64) -> f64) -> Form {
        assert_eq!(
            (self.dim, self.degree),
            (other.dim, other.degree),
            "form shapes differ"
        );
        Form {
            dim: self.dim,
            degree: self.degree,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect(),
        }
    }
}

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

impl Add for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul<f64> for &Form {
    type Output = Form;
    fn mul(self, s: f64) -> Form {
        Form {
            dim: self.dim,
            degree: self.degree,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        self * -1.0
    }
}

/// An antisymmetric bilinear form, stored as an `n×n` matrix `B_{ij} = B(e_i, e_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoForm(DMatrix<f64>);

impl TwoForm {
    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidInput("two-form must be square".into()));
        }
        let defect = (&m + m.transpose()).amax();
        if defect > ANTISYM_TOL * 1.0_f64.max(m.amax()) {
            return Err(Error::NotAntisymmetric {
                what: "two-form",
                defect,
            });
        }
        Ok(Self((&m - m.transpose()) * 0.5))
    }

    /// Builds `Σ_{i<j} f(i,j) e^i∧e^j`.
    pub fn from_upper(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = -v;
            }
        }
        Self(m)
    }

    /// `e^i ∧ e^j`.
    pub fn basis(n: usize, i: usize, j: usize) -> Self {
        let mut m = DMatrix::zeros(n, n);
        if i != j {
            m[(i, j)] = 1.0;
            m[(j, i)] = -1.0;
        }
        Self(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    /// `i_X B` as a covector: `(i_X B)_j = Σ_i X^i B_{ij}`.
    pub fn contract(&self, x: &DVector<f64>) -> DVector<f64> {
        self.0.transpose() * x
    }

    pub fn to_form(&self) -> Form {
        let n = self.dim();
        Form {
            dim: n,
            degree: 2,
            data: (0..n * n).map(|f| self.0[(f / n, f % n)]).collect(),
        }
    }

    pub fn from_form(f: &Form) -> Result<Self> {
        if f.degree != 2 {
            return Err(Error::InvalidInput(format!(
                "expected a 2-form, got degree {}",
                f.degree
            )));
        }
        let n = f.dim;
        Self::from_matrix(DMatrix::from_fn(n, n, |i, j| f.get(&[i, j])))
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(&self.0 * s)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.amax()
    }
}

impl Add for &TwoForm {
    type Output = TwoForm;
    fn add(self, rhs: &TwoForm) -> TwoForm {
        TwoForm(&self.0 + &rhs.0)
    }
}

impl Sub for &TwoForm {
    type Output = TwoForm;
    fn sub(self, rhs: &TwoForm) -> TwoForm {
        TwoForm(&self.0 - &rhs.0)
    }
}

/// A totally antisymmetric trilinear form `H_{ijk}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThreeForm {
    dim: usize,
    data: Vec<f64>,
}

impl ThreeForm {
    pub fn zeros(n: usize) -> Self {
        Self {
            dim: n,
            data: vec![0.0; n * n * n],
        }
    }

    /// `e^{ijk}` scaled by `coef`.
    pub fn basis(n: usize, i: usize, j: usize, k: usize, coef: f64) -> Result<Self> {
        let f = Form::basis(n, &[i, j, k])?;
        Ok(Self {
            dim: n,
            data: f.data.iter().map(|v| v * coef).collect(),
        })
    }

    pub fn from_form(f: &Form) -> Result<Self> {
        if f.degree != 3 {
            return Err(Error::InvalidInput(format!(
                "expected a 3-form, got degree {}",
                f.degree
            )));
        }
        Ok(Self {
            dim: f.dim,
            data: f.data.clone(),
        })
    }

    /// Accepts raw `n³` components; they must already be antisymmetric.
    pub fn from_components(n: usize, data: Vec<f64>) -> Result<Self> {
        Self::from_form(&Form::from_components(n, 3, data)?)
    }

    /// Builds `Σ_{i<j<k} f(i,j,k) e^{ijk}`.
    pub fn from_upper(n: usize, f: impl Fn(usize, usize, usize) -> f64) -> Self {
        let mut h = Self::zeros(n);
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    h.set_antisymmetric(i, j, k, f(i, j, k));
                }
            }
        }
        h
    }

    fn set_antisymmetric(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let n = self.dim;
        for (a, b, c, s) in [
            (i, j, k, 1.0),
            (j, k, i, 1.0),
            (k, i, j, 1.0),
            (j, i, k, -1.0),
            (i, k, j, -1.0),
            (k, j, i, -1.0),
        ] {
            self.data[idx3(n, a, b, c)] = s * v;
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[idx3(self.dim, i, j, k)]
    }

    pub fn components(&self) -> &[f64] {
        &self.data
    }

    pub fn to_form(&self) -> Form {
        Form {
            dim: self.dim,
            degree: 3,
            data: self.data.clone(),
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.data)
    }

    pub fn antisymmetry_defect(&self) -> f64 {
        self.to_form().antisymmetry_defect()
    }
}

impl Add for &ThreeForm {
    type Output = ThreeForm;
    fn add(self, rhs: &ThreeForm) -> ThreeForm {
        assert_eq!(self.dim, rhs.dim);
        ThreeForm {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ThreeForm {
    type Output = ThreeForm;
    fn sub(self, rhs: &ThreeForm) -> ThreeForm {
        assert_eq!(self.dim, rhs.dim);
        ThreeForm {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}
