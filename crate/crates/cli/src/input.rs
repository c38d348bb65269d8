//! Input file format: a JSON object carrying either the full matrix or its
//! three blocks, with optional mean vector and tolerance.
//!
//! ```json
//! { "V": [16 numbers, row-major, ordering (q1, p1, q2, p2)] }
//! { "blocks": { "A": [4 numbers], "B": [4 numbers], "C": [4 numbers] } }
//! ```
//!
//! With `--convention dgcz` the input is read as M = 2V and halved.

use gausep::CovarianceMatrix;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Convention {
    /// Vacuum covariance I/2 (native convention).
    Half,
    /// Doubled normalization M = 2V; inputs are halved on load.
    Dgcz,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Blocks {
    #[serde(rename = "A")]
    pub a: Vec<f64>,
    #[serde(rename = "B")]
    pub b: Vec<f64>,
    #[serde(rename = "C")]
    pub c: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    #[serde(rename = "V", skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Blocks>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean: Option<[f64; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

impl StateFile {
    pub fn from_covariance(v: &CovarianceMatrix, tol: Option<f64>) -> Self {
        StateFile {
            v: Some(v.rows().iter().flatten().copied().collect()),
            blocks: None,
            mean: None,
            tol,
        }
    }

    /// Builds the covariance matrix in the half convention.
    pub fn to_covariance(&self, convention: Convention) -> Result<CovarianceMatrix, String> {
        let mut rows = [[0.0_f64; 4]; 4];
        match (&self.v, &self.blocks) {
            (Some(_), Some(_)) => {
                return Err("provide either \"V\" or \"blocks\", not both".into())
            }
            (None, None) => return Err("missing matrix: provide \"V\" or \"blocks\"".into()),
            (Some(v), None) => {
                if v.len() != 16 {
                    return Err(format!("\"V\" must hold 16 numbers, got {}", v.len()));
                }
                for i in 0..4 {
                    for j in 0..4 {
                        rows[i][j] = v[4 * i + j];
                    }
                }
            }
            (None, Some(b)) => {
                for (name, block) in [("A", &b.a), ("B", &b.b), ("C", &b.c)] {
                    if block.len() != 4 {
                        return Err(format!(
                            "block \"{name}\" must hold 4 numbers, got {}",
                            block.len()
                        ));
                    }
                }
                for i in 0..2 {
                    for j in 0..2 {
                        rows[i][j] = b.a[2 * i + j];
                        rows[2 + i][2 + j] = b.b[2 * i + j];
                        rows[i][2 + j] = b.c[2 * i + j];
                        rows[2 + j][i] = b.c[2 * i + j];
                    }
                }
            }
        }
        if convention == Convention::Dgcz {
            for row in rows.iter_mut() {
                for x in row.iter_mut() {
                    *x *= 0.5;
                }
            }
        }
        CovarianceMatrix::new(rows).map_err(|e| e.to_string())
    }
}

pub fn load(path: &std::path::Path) -> Result<StateFile, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))
}
