//! Shared helpers for the integration tests: random inputs and independent
//! reference computations built on `nalgebra`.
#![allow(dead_code)]

use metaunravel::{Matrix, Vector, C64};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut impl Rng, n: usize) -> Matrix {
    Matrix::from_fn(n, n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn random_state(rng: &mut impl Rng, n: usize) -> Vector {
    Vector::from_vec((0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
        .normalized()
        .unwrap()
}

pub fn random_real_state(rng: &mut impl Rng, n: usize) -> Vector {
    Vector::from_vec((0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), 0.0)).collect()).normalized().unwrap()
}

pub fn random_density(rng: &mut impl Rng, n: usize) -> Matrix {
    let a = random_matrix(rng, n);
    let rho = a.matmul(&a.adjoint());
    let tr = rho.trace().re;
    rho.scale_real(1.0 / tr)
}

pub fn to_na(m: &Matrix) -> DMatrix<C64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

pub fn from_na(m: &DMatrix<C64>) -> Matrix {
    Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Eigenvalues from nalgebra's complex Schur decomposition.
pub fn reference_eigenvalues(m: &Matrix) -> Vec<C64> {
    let schur = nalgebra::linalg::Schur::new(to_na(m));
    schur.eigenvalues().expect("triangular Schur form").iter().cloned().collect()
}

/// `exp(A t)` from nalgebra's Pade approximant.
pub fn reference_expm(m: &Matrix, t: f64) -> Matrix {
    from_na(&(to_na(m) * C64::new(t, 0.0)).exp())
}

/// Matches two multisets of eigenvalues greedily; returns the largest
/// distance between partners.
pub fn spectrum_distance(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a {
        let (k, d) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}

/// Asymptotic p-value of the one-sample Kolmogorov–Smirnov statistic `d`
/// for sample size `n`, `Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2)`
/// with Stephens' small-sample correction of `lambda`.
pub fn ks_pvalue(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let term = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// KS statistic of `samples` against the continuous CDF `cdf`.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let f = cdf(*x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}
