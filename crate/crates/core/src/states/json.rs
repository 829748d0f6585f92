//! JSON interchange for density matrices:
//! `{"n": 4, "N": 2, "matrix": [[[re, im], ...], ...]}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityMatrixJson {
    pub n: usize,
    #[serde(rename = "N")]
    pub particles: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl From<&DensityMatrix> for DensityMatrixJson {
    fn from(rho: &DensityMatrix) -> Self {
        let m = rho.matrix();
        let matrix = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        Self {
            n: rho.n(),
            particles: rho.particles(),
            matrix,
        }
    }
}

impl TryFrom<DensityMatrixJson> for DensityMatrix {
    type Error = Error;

    fn try_from(value: DensityMatrixJson) -> Result<Self> {
        let rows = value.matrix.len();
        let mut data = Vec::with_capacity(rows * rows);
        for (i, row) in value.matrix.iter().enumerate() {
            if row.len() != rows {
                return Err(Error::Parse(format!(
                    "row {i} has {} entries, expected {rows}",
                    row.len()
                )));
            }
            data.extend(row.iter().map(|&[re, im]| Complex64::new(re, im)));
        }
        let matrix = ComplexMatrix::from_vec(rows, rows, data)?;
        DensityMatrix::new(value.n, value.particles, matrix)
    }
}

impl DensityMatrix {
    /// Parses and validates a density matrix from its JSON form.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: DensityMatrixJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        raw.try_into()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&DensityMatrixJson::from(self)).expect("plain data serializes")
    }
}
