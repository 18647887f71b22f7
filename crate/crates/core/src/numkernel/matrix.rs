//! Dense complex matrices and vectors.
//!
//! Storage is row-major. Superoperators act on density matrices through
//! column-stacking vectorisation: `vec(rho)[i + j * d] = rho[(i, j)]`, so that
//! `vec(A rho B) = (B^T kron A) vec(rho)`.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;

use crate::scalar::{cabs, cone, czero, Cx, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Cx<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CVector<T: Real> {
    data: Vec<Cx<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![czero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = cone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cx<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds from row-major data. Panics if the length does not match.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Cx<T>>) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major data has wrong length");
        Self { rows, cols, data }
    }

    /// Real matrix from nested rows. Panics on ragged input.
    pub fn from_real_rows(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Self::from_fn(r, c, |i, j| {
            assert_eq!(rows[i].len(), c, "ragged rows");
            Complex::new(rows[i][j], T::zero())
        })
    }

    pub fn diagonal(values: &[Cx<T>]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Cx<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Cx<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> CVector<T> {
        CVector::from_vec((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn set_column(&mut self, j: usize, v: &CVector<T>) {
        assert_eq!(v.len(), self.rows);
        for i in 0..self.rows {
            self[(i, j)] = v[i];
        }
    }

    pub fn from_columns(cols: &[CVector<T>]) -> Self {
        let n = cols.first().map_or(0, CVector::len);
        Self::from_fn(n, cols.len(), |i, j| cols[j][i])
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn map(&self, f: impl Fn(Cx<T>) -> Cx<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| f(*z)).collect() }
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn diagonal_entries(&self) -> Vec<Cx<T>> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn trace(&self) -> Cx<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).fold(czero(), |a, b| a + b)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> T {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| cabs(self[(i, j)])).sum::<T>())
            .fold(T::zero(), T::max)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| cabs(*z)).fold(T::zero(), T::max)
    }

    pub fn max_abs_imag(&self) -> T {
        self.data.iter().map(|z| z.im.abs()).fold(T::zero(), T::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.is_square() && (self - &self.adjoint()).max_abs() <= tol
    }

    /// `(self + self^dag) / 2`.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale_real(T::lit(0.5))
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        Self::from_fn(r, c, |i, j| {
            self[(i / other.rows, j / other.cols)] * other[(i % other.rows, j % other.cols)]
        })
    }

    pub fn matvec(&self, v: &CVector<T>) -> CVector<T> {
        assert_eq!(self.cols, v.len(), "matvec dimension mismatch");
        CVector::from_vec(
            (0..self.rows)
                .map(|i| self.row(i).iter().zip(v.iter()).fold(czero(), |acc, (a, b)| acc + *a * *b))
                .collect(),
        )
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let orow = other.row(k);
                let base = i * other.cols;
                for (j, b) in orow.iter().enumerate() {
                    out.data[base + j] = out.data[base + j] + a * *b;
                }
            }
        }
        out
    }

    /// Column-stacking vectorisation.
    pub fn vectorize(&self) -> CVector<T> {
        let mut v = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                v.push(self[(i, j)]);
            }
        }
        CVector::from_vec(v)
    }

    /// Inverse of [`CMatrix::vectorize`] for a `d x d` matrix.
    pub fn devectorize(v: &CVector<T>, d: usize) -> Self {
        assert_eq!(v.len(), d * d, "devectorize length mismatch");
        Self::from_fn(d, d, |i, j| v[i + j * d])
    }

    /// Hilbert-Schmidt inner product `Tr[self^dag other]`.
    pub fn hs_inner(&self, other: &Self) -> Cx<T> {
        self.data.iter().zip(other.data.iter()).fold(czero(), |acc, (a, b)| acc + a.conj() * *b)
    }

    /// `<u| self |v>`.
    pub fn sandwich(&self, u: &CVector<T>, v: &CVector<T>) -> Cx<T> {
        u.dot(&self.matvec(v))
    }
}

impl<T: Real> Index<(usize, usize)> for CMatrix<T> {
    type Output = Cx<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Cx<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cx<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<'a, T: Real> Add<&'a CMatrix<T>> for &'a CMatrix<T> {
    type Output = CMatrix<T>;
    fn add(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add shape mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl<'a, T: Real> Sub<&'a CMatrix<T>> for &'a CMatrix<T> {
    type Output = CMatrix<T>;
    fn sub(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub shape mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect(),
        }
    }
}

impl<'a, T: Real> Mul<&'a CMatrix<T>> for &'a CMatrix<T> {
    type Output = CMatrix<T>;
    fn mul(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        self.matmul(rhs)
    }
}

impl<T: Real> AddAssign<&CMatrix<T>> for CMatrix<T> {
    fn add_assign(&mut self, rhs: &CMatrix<T>) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add shape mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a = *a + *b;
        }
    }
}

impl<T: Real> Neg for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn neg(self) -> CMatrix<T> {
        self.map(|z| -z)
    }
}

impl<T: Real> CVector<T> {
    pub fn zeros(n: usize) -> Self {
        Self { data: vec![czero(); n] }
    }

    pub fn from_vec(data: Vec<Cx<T>>) -> Self {
        Self { data }
    }

    pub fn from_real(values: &[T]) -> Self {
        Self { data: values.iter().map(|x| Complex::new(*x, T::zero())).collect() }
    }

    /// Computational basis vector `|k>` in dimension `n`.
    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = Self::zeros(n);
        v.data[k] = cone();
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Cx<T>> {
        self.data.iter()
    }

    pub fn as_slice(&self) -> &[Cx<T>] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Cx<T>> {
        self.data
    }

    /// Conjugate-linear in `self`: `<self|other>`.
    pub fn dot(&self, other: &Self) -> Cx<T> {
        assert_eq!(self.len(), other.len(), "dot length mismatch");
        self.data.iter().zip(&other.data).fold(czero(), |acc, (a, b)| acc + a.conj() * *b)
    }

    pub fn norm_sqr(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        Self { data: self.data.iter().map(|z| *z * s).collect() }
    }

    pub fn scale_real(&self, s: T) -> Self {
        Self { data: self.data.iter().map(|z| *z * s).collect() }
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        if n > T::zero() && n.is_finite() {
            Some(self.scale_real(T::one() / n))
        } else {
            None
        }
    }

    /// `|self><other|`.
    pub fn outer(&self, other: &Self) -> CMatrix<T> {
        CMatrix::from_fn(self.len(), other.len(), |i, j| self.data[i] * other.data[j].conj())
    }

    /// `|self><self|`.
    pub fn projector(&self) -> CMatrix<T> {
        self.outer(self)
    }

    pub fn conj(&self) -> Self {
        Self { data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn axpy(&self, a: Cx<T>, other: &Self) -> Self {
        Self { data: self.data.iter().zip(&other.data).map(|(x, y)| *x + a * *y).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { data: self.data.iter().zip(&other.data).map(|(x, y)| *x - *y).collect() }
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| cabs(*z)).fold(T::zero(), T::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Multiplies by a global phase so the largest-modulus entry is real
    /// and positive (first such entry on ties).
    pub fn with_canonical_phase(&self) -> Self {
        let mut best = 0;
        let mut best_abs = T::zero();
        for (i, z) in self.data.iter().enumerate() {
            let a = cabs(*z);
            if a > best_abs * (T::one() + T::lit(1e-9)) {
                best = i;
                best_abs = a;
            }
        }
        if best_abs == T::zero() {
            return self.clone();
        }
        let z = self.data[best];
        self.scale(z.conj() / cabs(z))
    }
}

impl<T: Real> Index<usize> for CVector<T> {
    type Output = Cx<T>;
    #[inline]
    fn index(&self, i: usize) -> &Cx<T> {
        &self.data[i]
    }
}

impl<T: Real> IndexMut<usize> for CVector<T> {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut Cx<T> {
        &mut self.data[i]
    }
}

/// Trace distance between the pure states `|a><a|` and `|b><b|` for unit
/// vectors, `sqrt(1 - |<a|b>|^2)`, evaluated as the norm of the component
/// of `a` orthogonal to `b` so that nearby states keep full precision.
pub fn pure_trace_distance<T: Real>(a: &CVector<T>, b: &CVector<T>) -> T {
    let overlap = b.dot(a);
    let perp = a.axpy(-overlap, b);
    perp.norm().min(T::one())
}

/// Trace distance `||a - b||_1 / 2` between Hermitian matrices.
pub fn trace_distance<T: Real>(
    a: &CMatrix<T>,
    b: &CMatrix<T>,
) -> Result<T, crate::numkernel::KernelError> {
    let diff = (a - b).hermitian_part();
    let vals = crate::numkernel::eigenvalues(&diff)?;
    Ok(vals.iter().map(|z| z.re.abs()).sum::<T>() * T::lit(0.5))
}
