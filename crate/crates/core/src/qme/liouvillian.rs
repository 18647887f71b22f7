//! Lindblad superoperator in the column-stacked representation.

use crate::numkernel::CMatrix;
use crate::qme::LindbladModel;
use crate::scalar::{cx, Real};

/// Returns the `dim^2 x dim^2` matrix of
/// `L(rho) = -i[H, rho] + sum_k (J_k rho J_k^dag - {J_k^dag J_k, rho}/2)`
/// acting on `vec(rho)` (column stacking).
pub fn build_liouvillian<T: Real>(model: &LindbladModel<T>) -> CMatrix<T> {
    let d = model.dim();
    let id = CMatrix::<T>::identity(d);
    let minus_i = cx(T::zero(), -T::one());
    let h = model.hamiltonian();
    // -i (I kron H - H^T kron I)
    let mut l = (&id.kron(h) - &h.transpose().kron(&id)).scale(minus_i);
    let half = T::lit(0.5);
    for j in model.jumps() {
        let jdj = j.adjoint().matmul(j);
        l += &j.conj().kron(j);
        l += &id.kron(&jdj).scale_real(-half);
        l += &jdj.transpose().kron(&id).scale_real(-half);
    }
    l
}

/// Applies the Lindblad generator directly to a density matrix.
pub fn apply_lindblad<T: Real>(model: &LindbladModel<T>, rho: &CMatrix<T>) -> CMatrix<T> {
    let h = model.hamiltonian();
    let minus_i = cx(T::zero(), -T::one());
    let mut out = (&h.matmul(rho) - &rho.matmul(h)).scale(minus_i);
    let half = T::lit(0.5);
    for j in model.jumps() {
        let jd = j.adjoint();
        let jdj = jd.matmul(j);
        out += &j.matmul(rho).matmul(&jd);
        out += &(&jdj.matmul(rho) + &rho.matmul(&jdj)).scale_real(-half);
    }
    out
}
