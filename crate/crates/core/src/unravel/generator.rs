//! Non-unitary evolution between jumps, `G = -i H_eff`,
//! `H_eff = H - (i/2) sum_k J_k^dag J_k`.

use crate::error::{Error, Result};
use crate::numkernel::{CMatrix, CVector, EigenSystem, Propagator, Tolerances};
use crate::qme::LindbladModel;
use crate::{Matrix, Vector, C64};

/// Effective generator with a cached eigendecomposition.
#[derive(Clone, Debug)]
pub struct EffectiveGenerator {
    g: Matrix,
    jumps: Vec<Matrix>,
    propagator: Propagator<f64>,
    /// `<r_j, r_k>` for the right eigenvectors of `G`.
    gram: Matrix,
}

impl EffectiveGenerator {
    pub fn new(model: &LindbladModel) -> Result<Self> {
        Self::with_tolerances(model, &Tolerances::default())
    }

    pub fn with_tolerances(model: &LindbladModel, tol: &Tolerances) -> Result<Self> {
        let g = &model.hamiltonian().scale(C64::new(0.0, -1.0)) - &model.jump_sum().scale_real(0.5);
        let propagator = Propagator::with_tolerances(&g, tol)?;
        let r = &propagator.eigensystem().right;
        let n = r.len();
        let gram = CMatrix::from_fn(n, n, |j, k| r[j].dot(&r[k]));
        Ok(Self { g, jumps: model.jumps().to_vec(), propagator, gram })
    }

    pub fn dim(&self) -> usize {
        self.g.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.g
    }

    pub fn jumps(&self) -> &[Matrix] {
        &self.jumps
    }

    pub fn eigensystem(&self) -> &EigenSystem<f64> {
        self.propagator.eigensystem()
    }

    pub fn eigenvalues(&self) -> &[C64] {
        &self.eigensystem().values
    }

    /// `1 / max_j |Re theta_j|`, the fastest relaxation time of `G`.
    pub fn fast_time(&self) -> f64 {
        let rate = self.eigenvalues().iter().map(|z| z.re.abs()).fold(0.0, f64::max);
        if rate > 0.0 {
            1.0 / rate
        } else {
            1.0
        }
    }

    /// `1 / min_j |Re theta_j|` over eigenvalues with non-zero real part.
    pub fn slow_time(&self) -> f64 {
        let rate = self.eigenvalues().iter().map(|z| z.re.abs()).filter(|r| *r > 1e-300).fold(f64::INFINITY, f64::min);
        if rate.is_finite() {
            1.0 / rate
        } else {
            1.0
        }
    }

    /// `exp(G t) psi` (not normalised).
    pub fn evolve(&self, psi: &Vector, t: f64) -> Vector {
        self.propagator.apply(psi, t)
    }

    /// Survival function of the jumpless evolution from `psi`.
    pub fn survival(&self, psi: &Vector) -> Survival<'_> {
        Survival { gen: self, coeffs: self.propagator.coefficients(psi) }
    }

    /// Jump rate `||J_k psi||^2` for each channel.
    pub fn jump_rates(&self, psi: &Vector) -> Vec<f64> {
        self.jumps.iter().map(|j| j.matvec(psi).norm_sqr()).collect()
    }
}

pub fn effective_generator(model: &LindbladModel) -> Result<EffectiveGenerator> {
    EffectiveGenerator::new(model)
}

/// `S(t) = ||exp(G t) psi||^2` and the normalised jumpless state, both
/// evaluated from the spectral expansion of `psi`.
#[derive(Clone, Debug)]
pub struct Survival<'a> {
    gen: &'a EffectiveGenerator,
    coeffs: Vec<C64>,
}

impl Survival<'_> {
    pub fn coefficients(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn eval(&self, t: f64) -> f64 {
        let theta = self.gen.eigenvalues();
        let w: Vec<C64> = self.coeffs.iter().zip(theta).map(|(c, th)| *c * (*th * t).exp()).collect();
        let mut s = 0.0;
        for (j, wj) in w.iter().enumerate() {
            for (k, wk) in w.iter().enumerate() {
                s += (wj.conj() * *wk * self.gen.gram[(j, k)]).re;
            }
        }
        s.max(0.0)
    }

    /// `exp(G t) psi`, not normalised.
    pub fn unnormalised(&self, t: f64) -> Vector {
        self.gen.propagator.apply_coefficients(&self.coeffs, t)
    }

    /// Normalised jumpless state at time `t`. The expansion is rescaled by
    /// its slowest decay so that the direction survives long after `S(t)`
    /// has underflowed.
    pub fn state(&self, t: f64) -> Result<Vector> {
        scaled_expansion(self.gen.eigensystem(), &self.coeffs, t).normalized().ok_or(Error::AllRatesZero)
    }
}

/// `exp(-r t) sum_i c_i exp(theta_i t) v_i`, with `r` the largest
/// `Re theta_i` among the non-negligible coefficients.
pub(crate) fn scaled_expansion(eig: &crate::numkernel::EigenSystem<f64>, coeffs: &[C64], t: f64) -> Vector {
    let cmax = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let shift = eig
        .values
        .iter()
        .zip(coeffs)
        .filter(|(_, c)| c.norm() > 1e-12 * cmax)
        .map(|(th, _)| th.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let shift = if shift.is_finite() { shift } else { 0.0 };
    eig.values.iter().zip(&eig.right).zip(coeffs).fold(Vector::zeros(eig.dim()), |acc, ((th, r), c)| {
        acc.axpy(*c * ((*th - shift) * t).exp(), r)
    })
}

/// Jump probabilities `||J_k psi||^2 / sum_j ||J_j psi||^2`.
pub fn jump_channel_probabilities(gen: &EffectiveGenerator, psi: &CVector<f64>) -> Result<Vec<f64>> {
    let rates = gen.jump_rates(psi);
    let total: f64 = rates.iter().sum();
    if total < 1e-14 {
        return Err(Error::AllRatesZero);
    }
    let mut p: Vec<f64> = rates.iter().map(|r| r / total).collect();
    // make the simplex sum exact
    let rest: f64 = p[..p.len() - 1].iter().sum();
    let last = p.len() - 1;
    p[last] = (1.0 - rest).max(0.0);
    Ok(p)
}
