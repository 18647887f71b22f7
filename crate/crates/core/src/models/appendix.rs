//! Real 9x9 representation of the single-jump three-state Liouvillian in
//! the operator basis
//! `{|2><2|, |1><1|, |0><0|, sx01, sx02, sx12, isy01, isy02, isy12}`,
//! with `sx_jk = |j><k| + |k><j|` and `isy_jk = |j><k| - |k><j|`.

use crate::numkernel::{CMatrix, CVector};
use crate::scalar::{cx, Real};

/// The nine basis operators, in order.
pub fn appendix_basis<T: Real>() -> Vec<CMatrix<T>> {
    let unit = |i: usize, j: usize| {
        let mut m = CMatrix::<T>::zeros(3, 3);
        m[(i, j)] = cx(T::one(), T::zero());
        m
    };
    let sx = |j: usize, k: usize| &unit(j, k) + &unit(k, j);
    let isy = |j: usize, k: usize| &unit(j, k) - &unit(k, j);
    vec![unit(2, 2), unit(1, 1), unit(0, 0), sx(0, 1), sx(0, 2), sx(1, 2), isy(0, 1), isy(0, 2), isy(1, 2)]
}

/// Printed matrix, transcribed row by row.
pub fn appendix_liouvillian_3state<T: Real>(omega1: T, omega2: T, kappa1: T) -> CMatrix<T> {
    let z = T::zero();
    let (o1, o2, k) = (omega1, omega2, kappa1);
    let two = T::lit(2.0);
    let h = T::lit(0.5) * k;
    let rows = vec![
        vec![z, z, z, z, -o2, z, z, z, z],
        vec![z, -k, z, -o1, z, z, z, z, z],
        vec![z, k, z, o1, o2, z, z, z, z],
        vec![z, two * o1, -two * o1, -h, z, o2, z, z, z],
        vec![two * o2, z, -two * o2, z, z, o1, z, z, z],
        vec![z, z, z, -o2, -o1, -h, z, z, z],
        vec![z, z, z, z, z, z, -h, z, -o2],
        vec![z, z, z, z, z, z, z, z, o1],
        vec![z, z, z, z, z, z, o2, -o1, -h],
    ];
    CMatrix::from_real_rows(&rows)
}

/// Expresses a column-stacked superoperator on 3x3 matrices in the
/// appendix basis. Coordinates of `rho` are the Hilbert–Schmidt products
/// `x_a = Tr[B_a^dag rho]`; since the basis is orthogonal with Gram matrix
/// `diag(1, 1, 1, 2, ..., 2)`, the representation is
/// `B^dag L B Gram^{-1}` with `B` the matrix of vectorised basis operators.
pub fn to_appendix_basis<T: Real>(superop: &CMatrix<T>) -> CMatrix<T> {
    let basis = appendix_basis::<T>();
    let cols: Vec<CVector<T>> = basis.iter().map(|b| b.vectorize()).collect();
    let bmat = CMatrix::from_columns(&cols);
    let gram_inv: Vec<_> = cols.iter().map(|c| cx(T::one() / c.norm_sqr(), T::zero())).collect();
    bmat.adjoint().matmul(superop).matmul(&bmat).matmul(&CMatrix::diagonal(&gram_inv))
}
