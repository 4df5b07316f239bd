//! TOML round-trip for frames, metrics and forms.
//!
//! ```toml
//! dim = 3
//! c = [[[0.0, ...]]]   # c[i][j][k] = c^k_{ij}
//! g = [[1.0, ...]]
//! b = [[0.0, ...]]
//! H = [[[0.0, ...]]]
//! ```

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::forms::{ThreeForm, TwoForm};
use super::frame::LieFrame;
use crate::tensor::idx3;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantData {
    pub frame: LieFrame,
    pub g: Option<DMatrix<f64>>,
    pub b: Option<TwoForm>,
    pub h: Option<ThreeForm>,
}

#[derive(Serialize, Deserialize)]
struct Raw {
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    c: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    g: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<Vec<Vec<f64>>>,
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    h: Option<Vec<Vec<Vec<f64>>>>,
}

pub(crate) fn matrix_to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

pub(crate) fn rows_to_matrix(rows: &[Vec<f64>], n: usize, what: &str) -> Result<DMatrix<f64>> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse(format!("`{what}` must be {n}x{n}")));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn cube_to_nested(n: usize, data: &[f64]) -> Vec<Vec<Vec<f64>>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| data[idx3(n, i, j, k)]).collect())
                .collect()
        })
        .collect()
}

fn nested_to_cube(nested: &[Vec<Vec<f64>>], n: usize, what: &str) -> Result<Vec<f64>> {
    let ok = nested.len() == n
        && nested
            .iter()
            .all(|m| m.len() == n && m.iter().all(|r| r.len() == n));
    if !ok {
        return Err(Error::Parse(format!("`{what}` must be {n}x{n}x{n}")));
    }
    Ok(nested.iter().flatten().flatten().copied().collect())
}

impl InvariantData {
    pub fn new(frame: LieFrame) -> Self {
        Self {
            frame,
            g: None,
            b: None,
            h: None,
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        let n = self.frame.dim();
        let raw = Raw {
            dim: n,
            c: Some(cube_to_nested(n, self.frame.structure_constants())),
            g: self.g.as_ref().map(matrix_to_rows),
            b: self.b.as_ref().map(|b| matrix_to_rows(b.matrix())),
            h: self.h.as_ref().map(|h| cube_to_nested(n, h.components())),
        };
        toml::to_string(&raw).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: Raw = toml::from_str(text)?;
        let n = raw.dim;
        let frame = match raw.c {
            Some(c) => LieFrame::new(n, nested_to_cube(&c, n, "c")?)?,
            None => LieFrame::abelian(n),
        };
        let g = raw.g.map(|g| rows_to_matrix(&g, n, "g")).transpose()?;
        let b = raw
            .b
            .map(|b| rows_to_matrix(&b, n, "b").and_then(TwoForm::from_matrix))
            .transpose()?;
        let h = raw
            .h
            .map(|h| nested_to_cube(&h, n, "H").and_then(|d| ThreeForm::from_components(n, d)))
            .transpose()?;
        Ok(Self { frame, g, b, h })
    }
}
