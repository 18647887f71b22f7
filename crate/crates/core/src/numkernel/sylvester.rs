//! Bartels–Stewart solver for `A X + X B = C`.

use crate::numkernel::{schur, CMatrix, CVector, KernelError, Tolerances};
use crate::scalar::{cabs, czero, Real};

pub fn solve_sylvester<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>, c: &CMatrix<T>) -> Result<CMatrix<T>, KernelError> {
    solve_sylvester_with(a, b, c, &Tolerances::default())
}

/// Solves `A X + X B = C` through complex Schur forms of `A` and `B`.
///
/// Fails with [`KernelError::SingularPencil`] when some `a_i + b_j` is
/// below the separation tolerance, i.e. the solution is not unique.
pub fn solve_sylvester_with<T: Real>(
    a: &CMatrix<T>,
    b: &CMatrix<T>,
    c: &CMatrix<T>,
    tol: &Tolerances,
) -> Result<CMatrix<T>, KernelError> {
    let m = a.rows();
    let n = b.rows();
    if c.rows() != m {
        return Err(KernelError::DimensionMismatch { expected: m, found: c.rows() });
    }
    if c.cols() != n {
        return Err(KernelError::DimensionMismatch { expected: n, found: c.cols() });
    }
    let sa = schur(a)?;
    let sb = schur(b)?;
    let f = sa.z.adjoint().matmul(c).matmul(&sb.z);
    let t = &sa.t;
    let s = &sb.t;
    let sep = T::lit(tol.sylvester_separation);
    let mut y = CMatrix::zeros(m, n);
    for j in 0..n {
        let mut rhs: Vec<_> = (0..m).map(|i| f[(i, j)]).collect();
        for k in 0..j {
            let skj = s[(k, j)];
            if skj == czero() {
                continue;
            }
            for (i, r) in rhs.iter_mut().enumerate() {
                *r = *r - y[(i, k)] * skj;
            }
        }
        let sjj = s[(j, j)];
        let mut col = vec![czero(); m];
        for i in (0..m).rev() {
            let mut acc = rhs[i];
            for l in i + 1..m {
                acc = acc - t[(i, l)] * col[l];
            }
            let den = t[(i, i)] + sjj;
            if cabs(den) < sep {
                return Err(KernelError::SingularPencil { separation: cabs(den).as_f64() });
            }
            col[i] = acc / den;
        }
        y.set_column(j, &CVector::from_vec(col));
    }
    let x = sa.z.matmul(&y).matmul(&sb.z.adjoint());
    if cfg!(debug_assertions) || cfg!(test) {
        let resid = (&(&a.matmul(&x) + &x.matmul(b)) - c).frobenius_norm();
        let scale = (a.frobenius_norm() + b.frobenius_norm()) * x.frobenius_norm() + c.frobenius_norm();
        if resid > T::lit(tol.sylvester_residual) * scale.max(T::min_positive_value()) {
            return Err(KernelError::InaccurateSolution { residual: (resid / scale).as_f64() });
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn solves_lyapunov_equation() {
        let g = CMatrix::<f64>::from_fn(3, 3, |i, j| {
            if i == j {
                cx(-1.0 - i as f64, 0.3)
            } else {
                cx(0.2 * (i as f64 - j as f64), 0.1)
            }
        });
        let c = CMatrix::from_fn(3, 3, |i, j| cx((i + j) as f64, 0.0));
        let x = solve_sylvester(&g, &g.adjoint(), &c).unwrap();
        let resid = &(&g.matmul(&x) + &x.matmul(&g.adjoint())) - &c;
        assert!(resid.max_abs() < 1e-12);
    }

    #[test]
    fn singular_pencil_detected() {
        let a = CMatrix::<f64>::diagonal(&[cx(1.0, 0.0), cx(2.0, 0.0)]);
        let b = CMatrix::<f64>::diagonal(&[cx(-1.0, 0.0)]);
        let c = CMatrix::from_fn(2, 1, |_, _| cx(1.0, 0.0));
        assert!(matches!(solve_sylvester(&a, &b, &c), Err(KernelError::SingularPencil { .. })));
    }
}
