use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const DEFAULT_PERIOD: f64 = 2.0 * std::f64::consts::PI;

/// Node values on a uniform periodic grid, `nx × ny` with `ny = 1` for a line.
/// Storage is row-major in `y`: `values[j * nx + i]` sits at `(i h, j h)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicGrid {
    nx: usize,
    ny: usize,
    period: f64,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct Meta {
    n: usize,
    ny: usize,
    h: f64,
    period: f64,
    t: f64,
}

impl PeriodicGrid {
    pub fn new(nx: usize, ny: usize, period: f64, values: Vec<f64>) -> Result<Self> {
        if nx < 8 || (ny != 1 && ny != nx) {
            return Err(Error::InvalidInput(format!(
                "grid must be n×n or n×1 with n ≥ 8, got {nx}×{ny}"
            )));
        }
        if !(period > 0.0) {
            return Err(Error::NonPositive { name: "period", value: period });
        }
        if values.len() != nx * ny {
            return Err(Error::DimensionMismatch {
                expected: nx * ny,
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("grid values must be finite".into()));
        }
        Ok(Self { nx, ny, period, values })
    }

    pub fn square(n: usize, period: f64, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let h = period / n as f64;
        let values = (0..n * n).map(|k| f((k % n) as f64 * h, (k / n) as f64 * h)).collect();
        Self::new(n, n, period, values)
    }

    pub fn line(n: usize, period: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        let h = period / n as f64;
        Self::new(n, 1, period, (0..n).map(|i| f(i as f64 * h)).collect())
    }

    pub fn n(&self) -> usize {
        self.nx
    }

    pub fn is_line(&self) -> bool {
        self.ny == 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn spacing(&self) -> f64 {
        self.period / self.nx as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    /// Same shape, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::new(self.nx, self.ny, self.period, values)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        self.with_values(self.values.iter().map(|&v| f(v)).collect())
    }

    /// `(i, j)` of a flat index.
    pub fn node(&self, k: usize) -> (usize, usize) {
        (k % self.nx, k / self.nx)
    }

    /// Periodic second difference along x.
    pub fn dxx(&self) -> Vec<f64> {
        let (n, h2) = (self.nx, self.spacing().powi(2));
        (0..self.len())
            .map(|k| {
                let (i, j) = self.node(k);
                let row = j * n;
                (self.values[row + (i + 1) % n] - 2.0 * self.values[k] + self.values[row + (i + n - 1) % n]) / h2
            })
            .collect()
    }

    /// Periodic second difference along y; zero on a line.
    pub fn dyy(&self) -> Vec<f64> {
        if self.is_line() {
            return vec![0.0; self.len()];
        }
        let (n, h2) = (self.nx, self.spacing().powi(2));
        (0..self.len())
            .map(|k| {
                let (i, j) = self.node(k);
                let up = ((j + 1) % n) * n + i;
                let down = ((j + n - 1) % n) * n + i;
                (self.values[up] - 2.0 * self.values[k] + self.values[down]) / h2
            })
            .collect()
    }

    pub fn laplacian(&self) -> Vec<f64> {
        let mut out = self.dxx();
        if !self.is_line() {
            for (o, y) in out.iter_mut().zip(self.dyy()) {
                *o += y;
            }
        }
        out
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn inf(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn osc(&self) -> f64 {
        self.sup() - self.inf()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    /// Writes the values as a CSV matrix (one grid row per line) and a sidecar
    /// `<stem>.meta.toml` with `n`, `h` and `t`. Returns the sidecar path.
    pub fn write_csv(&self, path: &Path, t: f64) -> Result<PathBuf> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        for row in self.values.chunks(self.nx) {
            let line: Vec<String> = row.iter().map(|v| format!("{v:.17e}")).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        w.flush()?;
        let meta = Meta {
            n: self.nx,
            ny: self.ny,
            h: self.spacing(),
            period: self.period,
            t,
        };
        let side = path.with_extension("meta.toml");
        std::fs::write(&side, toml::to_string(&meta).map_err(|e| Error::Parse(e.to_string()))?)?;
        Ok(side)
    }

    /// Inverse of [`PeriodicGrid::write_csv`]; returns the grid and its time stamp.
    pub fn read_csv(path: &Path) -> Result<(Self, f64)> {
        let meta: Meta = toml::from_str(&std::fs::read_to_string(path.with_extension("meta.toml"))?)?;
        let mut values = Vec::with_capacity(meta.n * meta.ny);
        for line in std::fs::read_to_string(path)?.lines().filter(|l| !l.trim().is_empty()) {
            for cell in line.split(',') {
                values.push(
                    cell.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("{cell:?}: {e}")))?,
                );
            }
        }
        Ok((Self::new(meta.n, meta.ny, meta.period, values)?, meta.t))
    }
}
