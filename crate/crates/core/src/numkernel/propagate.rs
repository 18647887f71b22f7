//! `exp(A t) v` through a cached eigendecomposition.

use crate::numkernel::{eig_general_with, CMatrix, CVector, EigenSystem, KernelError, Tolerances};
use crate::scalar::{czero, Cx, Real};

/// Evaluates `exp(A t) v = sum_j <l_j, v> exp(lambda_j t) r_j` for many
/// times without re-diagonalising.
#[derive(Clone, Debug)]
pub struct Propagator<T: Real> {
    eig: EigenSystem<T>,
}

impl<T: Real> Propagator<T> {
    pub fn new(a: &CMatrix<T>) -> Result<Self, KernelError> {
        Self::with_tolerances(a, &Tolerances::default())
    }

    pub fn with_tolerances(a: &CMatrix<T>, tol: &Tolerances) -> Result<Self, KernelError> {
        Ok(Self { eig: eig_general_with(a, tol)? })
    }

    pub fn from_eigensystem(eig: EigenSystem<T>) -> Self {
        Self { eig }
    }

    pub fn eigensystem(&self) -> &EigenSystem<T> {
        &self.eig
    }

    pub fn coefficients(&self, v: &CVector<T>) -> Vec<Cx<T>> {
        self.eig.coefficients(v)
    }

    /// `exp(A t) v` given precomputed expansion coefficients of `v`.
    pub fn apply_coefficients(&self, coeffs: &[Cx<T>], t: T) -> CVector<T> {
        let n = self.eig.dim();
        let mut out = vec![czero(); n];
        for ((c, lam), r) in coeffs.iter().zip(&self.eig.values).zip(&self.eig.right) {
            if *c == czero() {
                continue;
            }
            let w = *c * (*lam * t).exp();
            for (o, x) in out.iter_mut().zip(r.iter()) {
                *o = *o + w * *x;
            }
        }
        CVector::from_vec(out)
    }

    pub fn apply(&self, v: &CVector<T>, t: T) -> CVector<T> {
        self.apply_coefficients(&self.coefficients(v), t)
    }

    /// The dense matrix `exp(A t)`.
    pub fn matrix(&self, t: T) -> CMatrix<T> {
        let n = self.eig.dim();
        let mut out = CMatrix::zeros(n, n);
        for ((lam, r), l) in self.eig.values.iter().zip(&self.eig.right).zip(&self.eig.left) {
            out += &r.outer(l).scale((*lam * t).exp());
        }
        out
    }
}
