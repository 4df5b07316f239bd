//! Fixed-step RK4 for small autonomous systems.

use crate::Result;

#[derive(Clone, Debug, Default)]
pub struct OdePath {
    pub t: Vec<f64>,
    pub y: Vec<Vec<f64>>,
    /// Why integration ended early, if it did.
    pub stopped: Option<String>,
}

impl OdePath {
    pub fn last(&self) -> &[f64] {
        self.y.last().map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn component(&self, i: usize) -> Vec<f64> {
        self.y.iter().map(|v| v[i]).collect()
    }
}

pub fn rk4_step<F>(f: &F, y: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    Ok(rk4_increment(f, y, h)?.iter().zip(y).map(|(d, v)| v + d).collect())
}

fn rk4_increment<F>(f: &F, y: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let axpy = |a: &[f64], b: &[f64], s: f64| -> Vec<f64> { a.iter().zip(b).map(|(x, k)| x + s * k).collect() };
    let k1 = f(y)?;
    let k2 = f(&axpy(y, &k1, 0.5 * h))?;
    let k3 = f(&axpy(y, &k2, 0.5 * h))?;
    let k4 = f(&axpy(y, &k3, h))?;
    Ok((0..y.len())
        .map(|i| h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

/// Integrates from `t = 0` to `t_end`, recording every step. A right-hand-side
/// error (such as a nonpositive variable) ends the path early. The state update
/// uses compensated summation so rounding does not mask the truncation error.
pub fn rk4_path<F>(f: F, y0: &[f64], dt: f64, t_end: f64) -> OdePath
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let mut path = OdePath {
        t: vec![0.0],
        y: vec![y0.to_vec()],
        stopped: None,
    };
    let steps = (t_end / dt).round() as usize;
    let mut y = y0.to_vec();
    let mut carry = vec![0.0; y.len()];
    for s in 1..=steps {
        match rk4_increment(&f, &y, dt) {
            Ok(inc) if inc.iter().all(|v| v.is_finite()) => {
                for i in 0..y.len() {
                    let d = inc[i] - carry[i];
                    let next = y[i] + d;
                    carry[i] = (next - y[i]) - d;
                    y[i] = next;
                }
                path.t.push(s as f64 * dt);
                path.y.push(y.clone());
            }
            Ok(_) => {
                path.stopped = Some(format!("non-finite state at t = {}", s as f64 * dt));
                break;
            }
            Err(e) => {
                path.stopped = Some(format!("{e} at t = {}", s as f64 * dt));
                break;
            }
        }
    }
    path
}
