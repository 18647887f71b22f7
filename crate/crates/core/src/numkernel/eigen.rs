//! General (non-Hermitian) complex eigendecomposition.
//!
//! Householder reduction to upper Hessenberg form, implicitly shifted
//! single-shift QR to a complex Schur form `A = Z T Z^dag`, right
//! eigenvectors by back substitution on `T`, left eigenvectors as the rows
//! of the inverse eigenvector matrix.

use num_complex::Complex;

use crate::numkernel::lu::Lu;
use crate::numkernel::{CMatrix, CVector, KernelError, Tolerances};
use crate::scalar::{cabs, cabs1, cone, creal, czero, Cx, Real};

/// Largest supported matrix dimension.
pub const MAX_DIM: usize = 256;

const MAX_ITER_PER_EIGENVALUE: usize = 100;

/// Unitary `Z` and upper-triangular `T` with `A = Z T Z^dag`.
#[derive(Clone, Debug)]
pub struct Schur<T: Real> {
    pub z: CMatrix<T>,
    pub t: CMatrix<T>,
}

/// Biorthonormal eigensystem `A r_j = lambda_j r_j`, `<l_i, r_j> = delta_ij`.
///
/// Eigenvalues are sorted by descending real part, ties by descending
/// imaginary part. Right vectors have unit norm.
#[derive(Clone, Debug)]
pub struct EigenSystem<T: Real> {
    pub values: Vec<Cx<T>>,
    pub right: Vec<CVector<T>>,
    pub left: Vec<CVector<T>>,
}

impl<T: Real> EigenSystem<T> {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Condition number `||l_j|| ||r_j||` of each eigenvalue.
    pub fn condition_numbers(&self) -> Vec<T> {
        self.left.iter().zip(&self.right).map(|(l, r)| l.norm() * r.norm()).collect()
    }

    /// `sum_j lambda_j r_j l_j^dag`.
    pub fn reconstruct(&self) -> CMatrix<T> {
        let n = self.dim();
        let mut out = CMatrix::zeros(n, n);
        for ((v, r), l) in self.values.iter().zip(&self.right).zip(&self.left) {
            out += &r.outer(l).scale(*v);
        }
        out
    }

    /// Largest `|<l_i, r_j> - delta_ij|`.
    pub fn biorthonormality_error(&self) -> T {
        let mut worst = T::zero();
        for (i, l) in self.left.iter().enumerate() {
            for (j, r) in self.right.iter().enumerate() {
                let target = if i == j { cone() } else { czero() };
                worst = worst.max(cabs(l.dot(r) - target));
            }
        }
        worst
    }

    /// Largest `||A r_j - lambda_j r_j||`.
    pub fn max_residual(&self, a: &CMatrix<T>) -> T {
        self.values
            .iter()
            .zip(&self.right)
            .map(|(v, r)| a.matvec(r).axpy(-*v, r).norm())
            .fold(T::zero(), T::max)
    }

    /// Expansion coefficients `c_j = <l_j, v>`.
    pub fn coefficients(&self, v: &CVector<T>) -> Vec<Cx<T>> {
        self.left.iter().map(|l| l.dot(v)).collect()
    }
}

fn check_input<T: Real>(a: &CMatrix<T>) -> Result<(), KernelError> {
    if !a.is_square() {
        return Err(KernelError::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    if a.rows() > MAX_DIM {
        return Err(KernelError::TooLarge { dim: a.rows() });
    }
    if !a.is_finite() {
        return Err(KernelError::NonFinite);
    }
    Ok(())
}

/// Returns `(Q, H)` with `A = Q H Q^dag` and `H` upper Hessenberg.
pub fn hessenberg<T: Real>(a: &CMatrix<T>) -> (CMatrix<T>, CMatrix<T>) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = CMatrix::identity(n);
    if n < 3 {
        return (q, h);
    }
    for k in 0..n - 2 {
        let xnorm = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<T>().sqrt();
        if xnorm == T::zero() {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if cabs(x0) > T::zero() { x0 / cabs(x0) } else { cone() };
        let alpha = -phase * xnorm;
        let mut v: Vec<Cx<T>> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] = v[0] - alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if vnorm == T::zero() {
            continue;
        }
        for z in v.iter_mut() {
            *z = *z / vnorm;
        }
        let two = T::lit(2.0);
        // H <- (I - 2 v v^dag) H on rows k+1..n
        for j in 0..n {
            let mut s = czero();
            for (idx, i) in (k + 1..n).enumerate() {
                s = s + v[idx].conj() * h[(i, j)];
            }
            let s = s * two;
            for (idx, i) in (k + 1..n).enumerate() {
                h[(i, j)] = h[(i, j)] - v[idx] * s;
            }
        }
        // H <- H (I - 2 v v^dag), Q <- Q (I - 2 v v^dag) on columns k+1..n
        for m in [&mut h, &mut q] {
            for i in 0..n {
                let mut s = czero();
                for (idx, j) in (k + 1..n).enumerate() {
                    s = s + m[(i, j)] * v[idx];
                }
                let s = s * two;
                for (idx, j) in (k + 1..n).enumerate() {
                    m[(i, j)] = m[(i, j)] - s * v[idx].conj();
                }
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = czero();
        }
    }
    (q, h)
}

/// Rotation `[[c, s], [-conj(s), c]]` mapping `(x, y)` to `(r, 0)`.
fn givens<T: Real>(x: Cx<T>, y: Cx<T>) -> (T, Cx<T>) {
    let ax = cabs(x);
    let ay = cabs(y);
    if ay == T::zero() {
        return (T::one(), czero());
    }
    if ax == T::zero() {
        return (T::zero(), cone());
    }
    let r = ax.hypot(ay);
    let c = ax / r;
    let s = (x / ax) * y.conj() / r;
    (c, s)
}

fn wilkinson_shift<T: Real>(h: &CMatrix<T>, hi: usize) -> Cx<T> {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let half = T::lit(0.5);
    let mean = (a + d) * half;
    let diff = (a - d) * half;
    let disc = (diff * diff + b * c).sqrt();
    let mu1 = mean + disc;
    let mu2 = mean - disc;
    if cabs(mu1 - d) <= cabs(mu2 - d) {
        mu1
    } else {
        mu2
    }
}

/// Complex Schur decomposition.
pub fn schur<T: Real>(a: &CMatrix<T>) -> Result<Schur<T>, KernelError> {
    check_input(a)?;
    let n = a.rows();
    let (mut z, mut h) = hessenberg(a);
    if n <= 1 {
        return Ok(Schur { z, t: h });
    }
    let eps = T::epsilon();
    let scale_floor = h.max_abs().max(T::min_positive_value());
    let mut hi = n - 1;
    let mut iter = 0usize;
    while hi > 0 {
        // locate the start of the trailing unreduced block
        let mut l = hi;
        while l > 0 {
            let mut s = cabs1(h[(l - 1, l - 1)]) + cabs1(h[(l, l)]);
            if s == T::zero() {
                s = scale_floor;
            }
            if cabs1(h[(l, l - 1)]) <= eps * s {
                h[(l, l - 1)] = czero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > MAX_ITER_PER_EIGENVALUE {
            return Err(KernelError::NonConvergence { iterations: iter });
        }
        let shift = if iter % 10 == 0 {
            h[(hi, hi)] + creal(T::lit(0.75) * cabs(h[(hi, hi - 1)]))
        } else {
            wilkinson_shift(&h, hi)
        };
        for k in l..hi {
            let (x, y) = if k == l {
                (h[(l, l)] - shift, h[(l + 1, l)])
            } else {
                (h[(k, k - 1)], h[(k + 1, k - 1)])
            };
            let (c, s) = givens(x, y);
            let col0 = if k == l { l } else { k - 1 };
            for j in col0..n {
                let p = h[(k, j)];
                let q = h[(k + 1, j)];
                h[(k, j)] = p * c + s * q;
                h[(k + 1, j)] = q * c - s.conj() * p;
            }
            if k > l {
                h[(k + 1, k - 1)] = czero();
            }
            let row_end = (k + 2).min(hi);
            for i in 0..=row_end {
                let p = h[(i, k)];
                let q = h[(i, k + 1)];
                h[(i, k)] = p * c + q * s.conj();
                h[(i, k + 1)] = q * c - p * s;
            }
            for i in 0..n {
                let p = z[(i, k)];
                let q = z[(i, k + 1)];
                z[(i, k)] = p * c + q * s.conj();
                z[(i, k + 1)] = q * c - p * s;
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            h[(i, j)] = czero();
        }
    }
    Ok(Schur { z, t: h })
}

fn sort_key_order<T: Real>(values: &[Cx<T>]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].re.partial_cmp(&values[a].re).unwrap_or(std::cmp::Ordering::Equal));
    // group real parts equal to rounding, then order each group by imaginary part
    let scale = values.iter().map(|z| cabs(*z)).fold(T::one(), T::max);
    let tie = T::lit(1e-12) * scale;
    let mut out = Vec::with_capacity(idx.len());
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && (values[idx[end - 1]].re - values[idx[end]].re).abs() <= tie {
            end += 1;
        }
        let mut group = idx[start..end].to_vec();
        group.sort_by(|&a, &b| values[b].im.partial_cmp(&values[a].im).unwrap_or(std::cmp::Ordering::Equal));
        out.extend(group);
        start = end;
    }
    out
}

/// Eigenvalues only, in the canonical order. Never reports defectiveness.
pub fn eigenvalues<T: Real>(a: &CMatrix<T>) -> Result<Vec<Cx<T>>, KernelError> {
    let s = schur(a)?;
    let vals: Vec<_> = (0..a.rows()).map(|i| s.t[(i, i)]).collect();
    Ok(sort_key_order(&vals).into_iter().map(|i| vals[i]).collect())
}

/// Real eigenvalues of the Hermitian part of `a`, ascending.
pub fn hermitian_eigenvalues<T: Real>(a: &CMatrix<T>) -> Result<Vec<T>, KernelError> {
    let mut vals: Vec<T> = schur(&a.hermitian_part())?.t.diagonal_entries().iter().map(|z| z.re).collect();
    vals.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    Ok(vals)
}

/// Right eigenvectors of an upper-triangular matrix, one column per
/// diagonal entry.
fn triangular_eigenvectors<T: Real>(t: &CMatrix<T>) -> CMatrix<T> {
    let n = t.rows();
    let small = T::epsilon() * t.max_abs().max(T::min_positive_value());
    let mut y = CMatrix::<T>::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        y[(k, k)] = cone();
        for i in (0..k).rev() {
            let mut s: Cx<T> = czero();
            for j in i + 1..=k {
                s = s + t[(i, j)] * y[(j, k)];
            }
            let mut den = t[(i, i)] - lambda;
            if cabs(den) < small {
                den = creal(small);
            }
            y[(i, k)] = -s / den;
        }
    }
    y
}

/// Full biorthonormal eigensystem with default tolerances.
pub fn eig_general<T: Real>(a: &CMatrix<T>) -> Result<EigenSystem<T>, KernelError> {
    eig_general_with(a, &Tolerances::default())
}

pub fn eig_general_with<T: Real>(a: &CMatrix<T>, tol: &Tolerances) -> Result<EigenSystem<T>, KernelError> {
    let s = schur(a)?;
    let n = a.rows();
    let y = triangular_eigenvectors(&s.t);
    let mut x = s.z.matmul(&y);
    for j in 0..n {
        let col = x.column(j);
        let nrm = col.norm();
        if nrm > T::zero() {
            x.set_column(j, &col.scale_real(T::one() / nrm));
        }
    }
    let raw_values: Vec<_> = (0..n).map(|i| s.t[(i, i)]).collect();
    let defective = |condition: f64| KernelError::DefectiveMatrix {
        eigenvalues: raw_values.iter().map(|z| Complex::new(z.re.as_f64(), z.im.as_f64())).collect(),
        condition,
    };
    let w = match Lu::factor(&x) {
        Ok(lu) => lu.inverse(),
        Err(_) => return Err(defective(f64::INFINITY)),
    };
    let order = sort_key_order(&raw_values);
    let mut values = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    let mut left = Vec::with_capacity(n);
    let mut worst = T::zero();
    for &i in &order {
        values.push(raw_values[i]);
        let r = x.column(i);
        // <l_i, r_j> = (W X)_ij, so l_i is the conjugated i-th row of W
        let l = CVector::from_vec(w.row(i).iter().map(|z| z.conj()).collect());
        worst = worst.max(l.norm() * r.norm());
        right.push(r);
        left.push(l);
    }
    if worst.as_f64() > tol.defective_condition || !worst.is_finite() {
        return Err(defective(worst.as_f64()));
    }
    Ok(EigenSystem { values, right, left })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    fn lcg_matrix(n: usize, seed: u64) -> CMatrix<f64> {
        let mut state = seed;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        CMatrix::from_fn(n, n, |_, _| cx(next(), next()))
    }

    #[test]
    fn hessenberg_is_similarity() {
        let a = lcg_matrix(6, 7);
        let (q, h) = hessenberg(&a);
        for i in 2..6 {
            for j in 0..i - 1 {
                assert_eq!(h[(i, j)], czero());
            }
        }
        let back = q.matmul(&h).matmul(&q.adjoint());
        assert!((&back - &a).max_abs() < 1e-12);
    }

    #[test]
    fn schur_reconstructs() {
        let a = lcg_matrix(9, 3);
        let s = schur(&a).unwrap();
        let back = s.z.matmul(&s.t).matmul(&s.z.adjoint());
        assert!((&back - &a).max_abs() < 1e-12);
        let zz = s.z.adjoint().matmul(&s.z);
        assert!((&zz - &CMatrix::identity(9)).max_abs() < 1e-12);
    }

    #[test]
    fn identity_eigenvalues() {
        let e = eig_general(&CMatrix::<f64>::identity(3)).unwrap();
        for v in &e.values {
            assert!((v - cx(1.0, 0.0)).norm() < 1e-14);
        }
        assert!(e.biorthonormality_error() < 1e-12);
    }

    #[test]
    fn rotation_generator_eigenvalues() {
        let a = CMatrix::<f64>::from_real_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]);
        let e = eig_general(&a).unwrap();
        assert!((e.values[0] - cx(0.0, 1.0)).norm() < 1e-14);
        assert!((e.values[1] - cx(0.0, -1.0)).norm() < 1e-14);
    }

    #[test]
    fn jordan_block_is_reported_defective() {
        let a = CMatrix::<f64>::from_real_rows(&[vec![2.0, 1.0], vec![0.0, 2.0]]);
        match eig_general(&a) {
            Err(KernelError::DefectiveMatrix { eigenvalues, .. }) => {
                assert_eq!(eigenvalues.len(), 2);
                for v in eigenvalues {
                    assert!((v.re - 2.0).abs() < 1e-7);
                }
            }
            other => panic!("expected DefectiveMatrix, got {other:?}"),
        }
    }

    #[test]
    fn repeated_semisimple_eigenvalue_is_fine() {
        let d = CMatrix::<f64>::diagonal(&[cx(1.0, 0.0), cx(-2.0, 0.0), cx(1.0, 0.0)]);
        let p = lcg_matrix(3, 11);
        let pinv = crate::numkernel::inverse(&p).unwrap();
        let a = p.matmul(&d).matmul(&pinv);
        let e = eig_general(&a).unwrap();
        assert!(e.max_residual(&a) < 1e-10 * a.norm1());
        assert!(e.biorthonormality_error() < 1e-8);
    }

    #[test]
    fn f32_matrices_work() {
        let a = CMatrix::<f32>::from_real_rows(&[vec![0.0, 1.0], vec![-2.0, -3.0]]);
        let e = eig_general(&a).unwrap();
        assert!((e.values[0].re + 1.0).abs() < 1e-5);
        assert!((e.values[1].re + 2.0).abs() < 1e-5);
    }
}
