//! Liouvillian eigen-structure: `L(R_j) = lambda_j R_j`, `L^dag(L_j) = conj(lambda_j) L_j`,
//! `Tr[L_i R_j] = delta_ij`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numkernel::{eig_general_with, CMatrix, CVector, EigenSystem, Propagator, Tolerances};
use crate::qme::{build_liouvillian, LindbladModel};
use crate::{Matrix, C64};

/// Biorthonormal eigenmatrices of the Liouvillian.
///
/// `right[0]` is the steady state with unit trace; `left[0]` is then the
/// identity. Eigenmatrices belonging to real eigenvalues are Hermitian.
#[derive(Clone, Debug)]
pub struct SpectralData {
    dim: usize,
    pub values: Vec<C64>,
    pub right: Vec<Matrix>,
    pub left: Vec<Matrix>,
    propagator: Propagator<f64>,
}

fn is_real(z: C64, tol: f64) -> bool {
    z.im.abs() <= tol * z.norm().max(1.0)
}

/// Global phase making `devec(v)` Hermitian, if it is Hermitian up to phase.
fn hermitian_phase(r: &Matrix) -> C64 {
    let d = r.rows();
    let (mut a, mut b, mut best) = (0, 0, -1.0);
    for i in 0..d {
        for j in 0..d {
            let v = r[(i, j)].norm();
            if v > best {
                best = v;
                a = i;
                b = j;
            }
        }
    }
    if best <= 0.0 {
        return Complex::new(1.0, 0.0);
    }
    let ratio = r[(a, b)] / r[(b, a)].conj();
    let half = 0.5 * ratio.arg();
    Complex::from_polar(1.0, half)
}

impl SpectralData {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn steady_state(&self) -> &Matrix {
        &self.right[0]
    }

    pub fn eigensystem(&self) -> &EigenSystem<f64> {
        self.propagator.eigensystem()
    }

    /// `Tr[L_k rho]` for every mode.
    pub fn overlaps(&self, rho: &Matrix) -> Vec<C64> {
        self.propagator.coefficients(&rho.vectorize())
    }

    /// Exact `rho(t) = exp(L t) rho0` for each time (Hermitised).
    pub fn evolve(&self, rho0: &Matrix, times: &[f64]) -> Vec<Matrix> {
        let coeffs = self.overlaps(rho0);
        times
            .iter()
            .map(|&t| CMatrix::devectorize(&self.propagator.apply_coefficients(&coeffs, t), self.dim).hermitian_part())
            .collect()
    }

    /// Truncation of the spectral sum to the `m` slowest modes,
    /// `rho_ss + sum_{k=2}^m Tr[L_k rho0] exp(lambda_k t) R_k`.
    pub fn truncated_evolution(&self, rho0: &Matrix, t: f64, m: usize) -> Matrix {
        let m = m.min(self.len());
        let coeffs = self.overlaps(rho0);
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for k in 0..m {
            out += &self.right[k].scale(coeffs[k] * (self.values[k] * t).exp());
        }
        out.hermitian_part()
    }

    /// Projection onto the slow manifold, the `t = 0` truncation.
    pub fn project_slow(&self, rho0: &Matrix, m: usize) -> Matrix {
        self.truncated_evolution(rho0, 0.0, m)
    }
}

pub fn spectral_decompose(model: &LindbladModel) -> Result<SpectralData> {
    spectral_decompose_with(model, &Tolerances::default())
}

pub fn spectral_decompose_with(model: &LindbladModel, tol: &Tolerances) -> Result<SpectralData> {
    let d = model.dim();
    let eig = eig_general_with(&build_liouvillian(model), tol)?;
    let zeros: Vec<C64> = eig.values.iter().copied().filter(|z| z.norm() < tol.zero_eigenvalue).collect();
    if zeros.len() > 1 {
        return Err(Error::DegenerateSteadyState { candidates: zeros });
    }
    let n = eig.dim();
    let mut right_vecs: Vec<CVector<f64>> = Vec::with_capacity(n);
    let mut left_vecs: Vec<CVector<f64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut r = eig.right[j].clone();
        let mut l = eig.left[j].clone();
        if j == 0 {
            let tr = CMatrix::devectorize(&r, d).trace();
            if tr.norm() < 1e-300 {
                return Err(Error::InvalidInput("steady-state eigenmatrix has zero trace".into()));
            }
            r = r.scale(tr.inv());
            l = l.scale(tr.conj());
        } else if is_real(eig.values[j], 1e-9) {
            let phase = hermitian_phase(&CMatrix::devectorize(&r, d)).conj();
            r = r.scale(phase);
            l = l.scale(phase);
        }
        right_vecs.push(r);
        left_vecs.push(l);
    }
    let mut right = Vec::with_capacity(n);
    let mut left = Vec::with_capacity(n);
    for j in 0..n {
        let mut rm = CMatrix::devectorize(&right_vecs[j], d);
        let mut lm = CMatrix::devectorize(&left_vecs[j], d).adjoint();
        if j == 0 || is_real(eig.values[j], 1e-9) {
            let rdev = (&rm - &rm.adjoint()).max_abs();
            let ldev = (&lm - &lm.adjoint()).max_abs();
            if rdev <= 1e-6 * rm.max_abs() && ldev <= 1e-6 * lm.max_abs() {
                rm = rm.hermitian_part();
                lm = lm.hermitian_part();
                right_vecs[j] = rm.vectorize();
                left_vecs[j] = lm.adjoint().vectorize();
            }
        }
        right.push(rm);
        left.push(lm);
    }
    let propagator = Propagator::from_eigensystem(EigenSystem { values: eig.values.clone(), right: right_vecs, left: left_vecs });
    Ok(SpectralData { dim: d, values: eig.values, right, left, propagator })
}

/// Validates a density matrix: Hermitian, unit trace, positive
/// semidefinite, each within `1e-9`.
pub fn check_density_matrix(rho: &Matrix, dim: usize) -> Result<()> {
    if rho.rows() != dim || rho.cols() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: rho.rows() });
    }
    if (rho - &rho.adjoint()).max_abs() > 1e-9 {
        return Err(Error::InvalidInput("density matrix is not Hermitian".into()));
    }
    if (rho.trace().re - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!("density matrix trace {} is not one", rho.trace().re)));
    }
    let min = crate::numkernel::hermitian_eigenvalues(rho)?.first().copied().unwrap_or(0.0);
    if min < -1e-9 {
        return Err(Error::InvalidInput(format!("density matrix has negative eigenvalue {min:e}")));
    }
    Ok(())
}

/// Exact QME evolution from `rho0` at the requested times.
pub fn evolve_qme(model: &LindbladModel, rho0: &Matrix, times: &[f64]) -> Result<Vec<Matrix>> {
    check_density_matrix(rho0, model.dim())?;
    if times.iter().any(|t| *t < 0.0 || !t.is_finite()) {
        return Err(Error::InvalidInput("times must be finite and non-negative".into()));
    }
    Ok(spectral_decompose(model)?.evolve(rho0, times))
}
