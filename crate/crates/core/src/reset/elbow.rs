//! Spectral analysis of the three-state jumpless trajectory: how long it
//! lingers near the intermediate eigenvector before turning towards the
//! dark asymptote.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::reset::ResetStructure;
use crate::unravel::EffectiveGenerator;
use crate::Vector;

#[derive(Clone, Debug, Serialize)]
pub struct ElbowReport {
    /// Threshold `d`.
    pub d: f64,
    pub theta_a: f64,
    pub theta_plus: f64,
    pub theta_minus: f64,
    /// Real expansion coefficients of the reset state, `A_a > 0`.
    pub a_a: f64,
    pub a_plus: f64,
    pub a_minus: f64,
    /// Time solving `A_a = d |A_+| exp(-(theta_a - theta_+) tau_e)`.
    pub tau_e: f64,
    /// Survival probability at `tau_e`, evaluated exactly.
    pub survival_at_tau_e: f64,
    /// Time at which the `phi_-` and `phi_a` contributions balance; the
    /// jumpless state is closest to `phi_+` around here.
    pub tau_elbow: f64,
    /// Normalised jumpless state at `tau_elbow`.
    #[serde(skip)]
    pub elbow_state: Vector,
    #[serde(skip)]
    pub phi_a: Vector,
    #[serde(skip)]
    pub phi_plus: Vector,
    #[serde(skip)]
    pub phi_minus: Vector,
}

/// Requires three real, distinct eigenvalues of `G` and a single reset
/// point.
pub fn elbow_analysis(gen: &EffectiveGenerator, rs: &ResetStructure, d: f64) -> Result<ElbowReport> {
    if d <= 0.0 {
        return Err(Error::InvalidInput("elbow threshold must be positive".into()));
    }
    let eig = gen.eigensystem();
    if eig.dim() != 3 {
        return Err(Error::InvalidInput("elbow analysis needs a three-level generator".into()));
    }
    let vals = &eig.values;
    if vals.iter().any(|z| z.im.abs() > 1e-10 * z.norm().max(1.0)) {
        return Err(Error::ComplexSpectrum(vals.clone()));
    }
    let reset = rs.reset_points.first().ok_or(Error::BadResetIndex(0))?;
    // real eigenvectors: rotate each right vector to canonical phase and
    // compensate in the left vector so <l, r> = 1 still holds
    let mut coeffs = [0.0; 3];
    let mut rights = Vec::with_capacity(3);
    for i in 0..3 {
        let r = &eig.right[i];
        let canon = r.with_canonical_phase();
        let phase = canon.dot(r); // r = phase^* ... recover the applied factor
        let factor = if phase.norm() > 0.0 { phase.conj() / phase.norm() } else { crate::C64::new(1.0, 0.0) };
        // canon = factor * r, so l must become l * factor (dot is conjugate-linear)
        let l = eig.left[i].scale(factor);
        let mut a = l.dot(reset).re;
        let mut canon = canon;
        if i == 0 && a < 0.0 {
            a = -a;
            canon = canon.scale_real(-1.0);
        }
        coeffs[i] = a;
        rights.push(canon);
    }
    let (a_a, a_plus, a_minus) = (coeffs[0], coeffs[1], coeffs[2]);
    let (th_a, th_p, th_m) = (vals[0].re, vals[1].re, vals[2].re);
    if !(th_a > th_p && th_p > th_m) {
        return Err(Error::InvalidInput("eigenvalues of G are not distinct".into()));
    }
    if a_a <= 0.0 {
        return Err(Error::InvalidInput("reset state has no overlap with the asymptote".into()));
    }
    let tau_e = (d * a_plus.abs() / a_a).ln() / (th_a - th_p);
    if !(tau_e > 0.0) {
        return Err(Error::InvalidInput(format!("elbow time {tau_e} is not positive")));
    }
    let surv = gen.survival(reset);
    let survival_at_tau_e = surv.eval(tau_e);
    let tau_elbow = ((a_minus.abs() / a_a).ln() / (th_a - th_m)).max(0.0);
    let elbow_state = surv.state(tau_elbow)?;
    let norm = |v: &Vector| v.normalized().unwrap_or_else(|| v.clone());
    Ok(ElbowReport {
        d,
        theta_a: th_a,
        theta_plus: th_p,
        theta_minus: th_m,
        a_a,
        a_plus,
        a_minus,
        tau_e,
        survival_at_tau_e,
        tau_elbow,
        elbow_state,
        phi_a: norm(&rights[0]),
        phi_plus: norm(&rights[1]),
        phi_minus: norm(&rights[2]),
    })
}
