use nalgebra::{DMatrix, DVector};

use super::metric::InvariantMetric;
use crate::courant::{LieFrame, ThreeForm};
use crate::tensor::{idx3, idx4, max_abs};

/// Which Bismut connection: `∇⁺` has torsion `+H`, `∇⁻` has torsion `−H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Coefficients `Γ^k_{ij}` with `∇_{e_i} e_j = Σ_k Γ^k_{ij} e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection {
    dim: usize,
    gamma: Vec<f64>,
}

impl Connection {
    pub fn from_components(dim: usize, gamma: Vec<f64>) -> Self {
        assert_eq!(gamma.len(), dim * dim * dim);
        Self { dim, gamma }
    }

    /// Raises the last index of `Γ_{ijk} = g(∇_{e_i}e_j, e_k)`.
    pub fn from_lowered(g: &InvariantMetric, lowered: &[f64]) -> Self {
        let n = g.dim();
        let mut gamma = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let mut s = 0.0;
                    for k in 0..n {
                        s += g.inv(l, k) * lowered[idx3(n, i, j, k)];
                    }
                    gamma[idx3(n, i, j, l)] = s;
                }
            }
        }
        Self { dim: n, gamma }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Γ^k_{ij}`.
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.gamma[idx3(self.dim, i, j, k)]
    }

    pub fn components(&self) -> &[f64] {
        &self.gamma
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.gamma)
    }

    pub fn covariant(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let n = self.dim;
        DVector::from_fn(n, |k, _| {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    s += x[i] * y[j] * self.get(i, j, k);
                }
            }
            s
        })
    }

    /// `Γ_{ijk} = g(∇_{e_i}e_j, e_k)`.
    pub fn lowered(&self, g: &InvariantMetric) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    out[idx3(n, i, j, k)] = (0..n).map(|m| self.get(i, j, m) * g.get(m, k)).sum();
                }
            }
        }
        out
    }

    /// Torsion `T^k_{ij} = Γ^k_{ij} − Γ^k_{ji} − c^k_{ij}`.
    pub fn torsion(&self, frame: &LieFrame) -> Vec<f64> {
        let n = self.dim;
        let mut t = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    t[idx3(n, i, j, k)] = self.get(i, j, k) - self.get(j, i, k) - frame.c(i, j, k);
                }
            }
        }
        t
    }

    /// `max |g(∇_i e_j, e_k) + g(e_j, ∇_i e_k)|`.
    pub fn metric_compatibility_defect(&self, g: &InvariantMetric) -> f64 {
        let n = self.dim;
        let low = self.lowered(g);
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    worst = worst.max((low[idx3(n, i, j, k)] + low[idx3(n, i, k, j)]).abs());
                }
            }
        }
        worst
    }

    /// `(∇_i φ)_j = −Γ^m_{ij} φ_m`.
    pub fn nabla_covector(&self, phi: &DVector<f64>) -> DMatrix<f64> {
        let n = self.dim;
        DMatrix::from_fn(n, n, |i, j| -(0..n).map(|m| self.get(i, j, m) * phi[m]).sum::<f64>())
    }

    /// `(∇_i T)_{jk}` flattened as `idx3(i,j,k)`.
    pub fn nabla_two(&self, t: &DMatrix<f64>) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut s = 0.0;
                    for m in 0..n {
                        s -= self.get(i, j, m) * t[(m, k)] + self.get(i, k, m) * t[(j, m)];
                    }
                    out[idx3(n, i, j, k)] = s;
                }
            }
        }
        out
    }

    /// `(∇_i A)_{jkl}` for a 3-tensor stored as `idx3`, flattened as `idx4(i,j,k,l)`.
    pub fn nabla_three(&self, a: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n.pow(4)];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut s = 0.0;
                        for m in 0..n {
                            s -= self.get(i, j, m) * a[idx3(n, m, k, l)]
                                + self.get(i, k, m) * a[idx3(n, j, m, l)]
                                + self.get(i, l, m) * a[idx3(n, j, k, m)];
                        }
                        out[idx4(n, i, j, k, l)] = s;
                    }
                }
            }
        }
        out
    }
}

/// Levi-Civita connection from the Koszul formula on invariant fields:
/// `2g(∇_i e_j, e_k) = g([e_i,e_j],e_k) − g([e_j,e_k],e_i) + g([e_k,e_i],e_j)`.
pub fn levi_civita(frame: &LieFrame, g: &InvariantMetric) -> Connection {
    let n = frame.dim();
    let bracket_low = bracket_lowered(frame, g);
    let mut low = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                low[idx3(n, i, j, k)] = 0.5
                    * (bracket_low[idx3(n, i, j, k)] - bracket_low[idx3(n, j, k, i)]
                        + bracket_low[idx3(n, k, i, j)]);
            }
        }
    }
    Connection::from_lowered(g, &low)
}

/// `g([e_i, e_j], e_k)`.
fn bracket_lowered(frame: &LieFrame, g: &InvariantMetric) -> Vec<f64> {
    let n = frame.dim();
    let mut out = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out[idx3(n, i, j, k)] = (0..n).map(|m| frame.c(i, j, m) * g.get(m, k)).sum();
            }
        }
    }
    out
}

/// `g(∇^±_X Y, Z) = g(∇_X Y, Z) ± ½H(X,Y,Z)`.
pub fn bismut_connection(frame: &LieFrame, g: &InvariantMetric, h: &ThreeForm, sign: Sign) -> Connection {
    let mut low = levi_civita(frame, g).lowered(g);
    let s = 0.5 * sign.value();
    for (v, hv) in low.iter_mut().zip(h.components()) {
        *v += s * hv;
    }
    Connection::from_lowered(g, &low)
}
