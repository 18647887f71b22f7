//! LU factorisation with partial pivoting.

use crate::numkernel::{CMatrix, CVector, KernelError};
use crate::scalar::{cabs, cone, czero, Real};

pub(crate) struct Lu<T: Real> {
    lu: CMatrix<T>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    /// Fails with [`KernelError::Singular`] when a pivot falls below
    /// `n * eps * ||A||_1`.
    pub fn factor(a: &CMatrix<T>) -> Result<Self, KernelError> {
        if !a.is_square() {
            return Err(KernelError::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let thresh = T::lit(n.max(1) as f64) * T::epsilon() * a.norm1();
        for k in 0..n {
            let mut p = k;
            let mut best = cabs(lu[(k, k)]);
            for i in k + 1..n {
                let v = cabs(lu[(i, k)]);
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= thresh || best == T::zero() {
                return Err(KernelError::Singular { pivot: best.as_f64() });
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f == czero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] = lu[(i, j)] - f * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve(&self, b: &CVector<T>) -> CVector<T> {
        let n = self.lu.rows();
        let mut x: Vec<_> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s = s - self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s = s - self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        CVector::from_vec(x)
    }

    pub fn inverse(&self) -> CMatrix<T> {
        let n = self.lu.rows();
        let mut inv = CMatrix::zeros(n, n);
        for j in 0..n {
            let mut e = CVector::zeros(n);
            e[j] = cone();
            inv.set_column(j, &self.solve(&e));
        }
        inv
    }
}

/// Solves `A x = b`.
pub fn solve_linear<T: Real>(a: &CMatrix<T>, b: &CVector<T>) -> Result<CVector<T>, KernelError> {
    Ok(Lu::factor(a)?.solve(b))
}

pub fn inverse<T: Real>(a: &CMatrix<T>) -> Result<CMatrix<T>, KernelError> {
    Ok(Lu::factor(a)?.inverse())
}
