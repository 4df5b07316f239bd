use nalgebra::DMatrix;

use super::connection::{bismut_connection, levi_civita, Connection, Sign};
use super::metric::InvariantMetric;
use crate::courant::{LieFrame, ThreeForm, TwoForm};
use crate::tensor::{idx3, idx4, max_abs};

/// `Rm_{ijkl} = g(R(e_i,e_j)e_k, e_l)` with
/// `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_{[X,Y]}Z`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensor {
    dim: usize,
    rm: Vec<f64>,
}

impl CurvatureTensor {
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.rm[idx4(self.dim, i, j, k, l)]
    }

    pub fn components(&self) -> &[f64] {
        &self.rm
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.rm)
    }

    /// Largest violation of antisymmetry in `(i,j)` and in `(k,l)`.
    pub fn antisymmetry_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = self.get(i, j, k, l);
                        worst = worst
                            .max((v + self.get(j, i, k, l)).abs())
                            .max((v + self.get(i, j, l, k)).abs());
                    }
                }
            }
        }
        worst
    }

    /// `|Rm|_g` with all four indices raised.
    pub fn norm(&self, g: &InvariantMetric) -> f64 {
        let n = self.dim;
        let mut raised = self.rm.clone();
        for slot in 0..4 {
            let mut next = vec![0.0; raised.len()];
            for (flat, out) in next.iter_mut().enumerate() {
                let mut idx = [flat / (n * n * n), (flat / (n * n)) % n, (flat / n) % n, flat % n];
                let target = idx[slot];
                let mut s = 0.0;
                for m in 0..n {
                    idx[slot] = m;
                    s += g.inv(target, m) * raised[idx4(n, idx[0], idx[1], idx[2], idx[3])];
                }
                *out = s;
            }
            raised = next;
        }
        raised.iter().zip(&self.rm).map(|(a, b)| a * b).sum::<f64>().max(0.0).sqrt()
    }
}

/// `R^l_{ijk} = Γ^l_{im}Γ^m_{jk} − Γ^l_{jm}Γ^m_{ik} − c^m_{ij}Γ^l_{mk}`, lowered with `g`.
pub fn riemann(frame: &LieFrame, g: &InvariantMetric, conn: &Connection) -> CurvatureTensor {
    let n = frame.dim();
    let mut up = vec![0.0; n.pow(4)];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut s = 0.0;
                    for m in 0..n {
                        s += conn.get(i, m, l) * conn.get(j, k, m) - conn.get(j, m, l) * conn.get(i, k, m)
                            - frame.c(i, j, m) * conn.get(m, k, l);
                    }
                    up[idx4(n, i, j, k, l)] = s;
                }
            }
        }
    }
    let mut rm = vec![0.0; n.pow(4)];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    rm[idx4(n, i, j, k, l)] = (0..n).map(|m| up[idx4(n, i, j, k, m)] * g.get(m, l)).sum();
                }
            }
        }
    }
    CurvatureTensor { dim: n, rm }
}

/// `Rc_{jk} = g^{il} Rm_{ijkl}`, the trace `X ↦ R(X,Y)Z`.
pub fn ricci(g: &InvariantMetric, rm: &CurvatureTensor) -> DMatrix<f64> {
    let n = rm.dim();
    DMatrix::from_fn(n, n, |j, k| {
        let mut s = 0.0;
        for i in 0..n {
            for l in 0..n {
                s += g.inv(i, l) * rm.get(i, j, k, l);
            }
        }
        s
    })
}

pub fn trace_g(g: &InvariantMetric, t: &DMatrix<f64>) -> f64 {
    g.inverse().component_mul(t).sum()
}

pub fn scalar(g: &InvariantMetric, rc: &DMatrix<f64>) -> f64 {
    trace_g(g, rc)
}

/// Levi-Civita Ricci tensor.
pub fn ricci_lc(frame: &LieFrame, g: &InvariantMetric) -> DMatrix<f64> {
    ricci(g, &riemann(frame, g, &levi_civita(frame, g)))
}

pub fn scalar_lc(frame: &LieFrame, g: &InvariantMetric) -> f64 {
    scalar(g, &ricci_lc(frame, g))
}

/// `H²_{ab} = H_{aij} H_{bkl} g^{ik} g^{jl}`.
pub fn h_squared(g: &InvariantMetric, h: &ThreeForm) -> DMatrix<f64> {
    let n = g.dim();
    // raise the last two slots once, then contract
    let mut raised = vec![0.0; n * n * n];
    for a in 0..n {
        for k in 0..n {
            for l in 0..n {
                let mut s = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        s += g.inv(k, i) * g.inv(l, j) * h.get(a, i, j);
                    }
                }
                raised[idx3(n, a, k, l)] = s;
            }
        }
    }
    DMatrix::from_fn(n, n, |a, b| {
        let mut s = 0.0;
        for k in 0..n {
            for l in 0..n {
                s += raised[idx3(n, a, k, l)] * h.get(b, k, l);
            }
        }
        s
    })
}

/// `|H|² = tr_g H²` (full sum over ordered indices).
pub fn h_norm2(g: &InvariantMetric, h: &ThreeForm) -> f64 {
    trace_g(g, &h_squared(g, h))
}

/// `(d*H)_{jk} = −g^{il}(∇_i H)_{ljk}` with the Levi-Civita connection.
pub fn codifferential_h(frame: &LieFrame, g: &InvariantMetric, h: &ThreeForm) -> TwoForm {
    let lc = levi_civita(frame, g);
    codifferential_with(&lc, g, h)
}

pub(crate) fn codifferential_with(lc: &Connection, g: &InvariantMetric, h: &ThreeForm) -> TwoForm {
    let n = g.dim();
    let nh = lc.nabla_three(h.components());
    let m = DMatrix::from_fn(n, n, |j, k| {
        let mut s = 0.0;
        for i in 0..n {
            for l in 0..n {
                s -= g.inv(i, l) * nh[idx4(n, i, l, j, k)];
            }
        }
        s
    });
    TwoForm::from_matrix((&m - m.transpose()) * 0.5).expect("antisymmetric by construction")
}

/// Bismut Ricci tensor computed two ways.
#[derive(Clone, Debug)]
pub struct BismutRicci {
    /// Trace of the curvature of `∇^±`.
    pub traced: DMatrix<f64>,
    /// `Rc − ¼H² ∓ ½d*H`.
    pub formula: DMatrix<f64>,
    /// `max |dH|`; the closed formula assumes zero.
    pub dh: f64,
}

impl BismutRicci {
    pub fn agreement(&self) -> f64 {
        (&self.traced - &self.formula).amax()
    }
}

pub fn bismut_ricci(frame: &LieFrame, g: &InvariantMetric, h: &ThreeForm, sign: Sign) -> BismutRicci {
    let dh = frame
        .exterior_d(&h.to_form())
        .map(|f| f.max_abs())
        .unwrap_or(f64::NAN);
    if dh > crate::DEFAULT_TOL {
        log::warn!("Bismut Ricci formula assumes dH = 0; |dH| = {dh:.3e}");
    }
    let conn = bismut_connection(frame, g, h, sign);
    let traced = ricci(g, &riemann(frame, g, &conn));
    let lc = levi_civita(frame, g);
    let rc = ricci(g, &riemann(frame, g, &lc));
    let dstar = codifferential_with(&lc, g, h);
    let formula = rc - h_squared(g, h) * 0.25 - dstar.matrix() * (0.5 * sign.value());
    BismutRicci { traced, formula, dh }
}

/// `R^± = R − ¼|H|²`.
pub fn bismut_scalar(frame: &LieFrame, g: &InvariantMetric, h: &ThreeForm) -> f64 {
    scalar_lc(frame, g) - 0.25 * h_norm2(g, h)
}
