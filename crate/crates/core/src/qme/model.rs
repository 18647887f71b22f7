//! Lindblad model definition and its JSON document form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::CMatrix;
use crate::scalar::{cx, Real};

/// Hamiltonian plus jump operators on a `dim`-dimensional Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct LindbladModel<T: Real = f64> {
    dim: usize,
    h: CMatrix<T>,
    jumps: Vec<CMatrix<T>>,
    label: String,
}

impl<T: Real> LindbladModel<T> {
    /// Validates shapes and Hermiticity of `h` (absolute tolerance `1e-10`
    /// scaled by `max(1, max|H_ij|)`).
    pub fn new(h: CMatrix<T>, jumps: Vec<CMatrix<T>>, label: impl Into<String>) -> Result<Self> {
        let dim = h.rows();
        if dim == 0 {
            return Err(Error::InvalidInput("Hilbert dimension must be positive".into()));
        }
        if !h.is_square() {
            return Err(Error::DimensionMismatch { expected: dim, found: h.cols() });
        }
        for j in &jumps {
            if j.rows() != dim || j.cols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: j.rows().max(j.cols()) });
            }
        }
        if !h.is_finite() || jumps.iter().any(|j| !j.is_finite()) {
            return Err(Error::InvalidInput("model matrices contain non-finite entries".into()));
        }
        let deviation = (&h - &h.adjoint()).max_abs();
        let scale = h.max_abs().max(T::one());
        if deviation > T::lit(1e-10) * scale {
            return Err(Error::NotHermitian { deviation: deviation.as_f64() });
        }
        Ok(Self { dim, h, jumps, label: label.into() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hamiltonian(&self) -> &CMatrix<T> {
        &self.h
    }

    pub fn jumps(&self) -> &[CMatrix<T>] {
        &self.jumps
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `sum_k J_k^dag J_k`.
    pub fn jump_sum(&self) -> CMatrix<T> {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for j in &self.jumps {
            out += &j.adjoint().matmul(j);
        }
        out
    }

    /// Total jump activity `sum_k Tr[J_k rho J_k^dag]`.
    pub fn activity(&self, rho: &CMatrix<T>) -> T {
        self.jump_sum().matmul(rho).trace().re
    }

    /// Converts the entries to another precision.
    pub fn cast<U: Real>(&self) -> LindbladModel<U> {
        let conv = |m: &CMatrix<T>| {
            CMatrix::from_fn(m.rows(), m.cols(), |i, j| {
                let z = m[(i, j)];
                cx(U::lit(z.re.as_f64()), U::lit(z.im.as_f64()))
            })
        };
        LindbladModel { dim: self.dim, h: conv(&self.h), jumps: self.jumps.iter().map(conv).collect(), label: self.label.clone() }
    }
}

/// Serialised model: `{dim, H: [[[re, im], ...], ...], jumps: [H-like...], label}`.
/// Matrices are lists of rows; each entry is a `[re, im]` pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub dim: usize,
    #[serde(rename = "H")]
    pub h: Vec<Vec<[f64; 2]>>,
    pub jumps: Vec<Vec<Vec<[f64; 2]>>>,
    #[serde(default)]
    pub label: String,
}

fn matrix_to_rows(m: &CMatrix<f64>) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect()).collect()
}

fn rows_to_matrix(rows: &[Vec<[f64; 2]>], dim: usize) -> Result<CMatrix<f64>> {
    if rows.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: rows.len() });
    }
    for r in rows {
        if r.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: r.len() });
        }
    }
    Ok(CMatrix::from_fn(dim, dim, |i, j| cx(rows[i][j][0], rows[i][j][1])))
}

impl LindbladModel<f64> {
    pub fn to_document(&self) -> ModelDocument {
        ModelDocument {
            dim: self.dim,
            h: matrix_to_rows(&self.h),
            jumps: self.jumps.iter().map(matrix_to_rows).collect(),
            label: self.label.clone(),
        }
    }

    pub fn from_document(doc: &ModelDocument) -> Result<Self> {
        let h = rows_to_matrix(&doc.h, doc.dim)?;
        let jumps = doc.jumps.iter().map(|j| rows_to_matrix(j, doc.dim)).collect::<Result<Vec<_>>>()?;
        Self::new(h, jumps, doc.label.clone())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_document(&serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_hermitian_hamiltonian() {
        let h = CMatrix::<f64>::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert!(matches!(LindbladModel::new(h, vec![], "x"), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn rejects_mismatched_jump() {
        let h = CMatrix::<f64>::zeros(2, 2);
        let j = CMatrix::<f64>::zeros(3, 3);
        assert!(matches!(LindbladModel::new(h, vec![j], "x"), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let h = CMatrix::from_fn(2, 2, |i, j| if i == j { cx(0.1 + i as f64 / 3.0, 0.0) } else if i < j { cx(0.7, 1.0 / 7.0) } else { cx(0.7, -1.0 / 7.0) });
        let j = CMatrix::from_fn(2, 2, |i, j| cx((i * 2 + j) as f64 * std::f64::consts::PI, 1e-17));
        let m = LindbladModel::new(h, vec![j], "round").unwrap();
        let back = LindbladModel::from_json(&m.to_json().unwrap()).unwrap();
        assert_eq!(m, back);
    }
}
