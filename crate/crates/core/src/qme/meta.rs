//! Slow-mode structure: timescales, extremal metastable states and
//! committor operators.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{hermitian_eigenvalues, CMatrix, CVector, Tolerances};
use crate::qme::{LindbladModel, SpectralData};
use crate::Matrix;

/// Two-phase (`m = 2`) metastable structure. Phase `A` is the bright one,
/// i.e. the extremal state with the larger jump activity.
#[derive(Clone, Debug)]
pub struct TwoPhase {
    pub rho_a: Matrix,
    pub rho_b: Matrix,
    pub p_a: Matrix,
    pub p_b: Matrix,
    /// Extremal eigenvalues of `L_2`.
    pub alpha_min: f64,
    pub alpha_max: f64,
    /// `true` when the bright phase corresponds to `alpha_min`.
    pub swapped: bool,
}

#[derive(Clone, Debug)]
pub enum PhaseStructure {
    TwoPhase(TwoPhase),
    /// `m > 2`: only the timescales are reported.
    NotClassical,
}

#[derive(Clone, Debug)]
pub struct MetaDecomposition {
    pub m: usize,
    pub tau_s: f64,
    pub tau_f: f64,
    pub gap_ratio: f64,
    pub phases: PhaseStructure,
}

impl MetaDecomposition {
    pub fn two_phase(&self) -> Option<&TwoPhase> {
        match &self.phases {
            PhaseStructure::TwoPhase(p) => Some(p),
            PhaseStructure::NotClassical => None,
        }
    }
}

/// Summary row for reports.
#[derive(Clone, Debug, Serialize)]
pub struct Timescales {
    pub m: usize,
    pub tau_s: f64,
    pub tau_f: f64,
    pub gap_ratio: f64,
}

fn ratio_at(values: &[crate::C64], m: usize) -> f64 {
    let slow = values[m - 1].re.abs();
    let fast = values[m].re.abs();
    if slow == 0.0 {
        f64::INFINITY
    } else {
        fast / slow
    }
}

/// `m` maximising `|Re lambda_{m+1}| / |Re lambda_m|` over `2 <= m < n`.
pub fn choose_slow_modes(spectral: &SpectralData) -> Option<(usize, f64)> {
    let n = spectral.len();
    (2..n).map(|m| (m, ratio_at(&spectral.values, m))).fold(None, |best, (m, r)| match best {
        Some((_, br)) if br >= r => best,
        _ => Some((m, r)),
    })
}

pub fn metastable_analysis(model: &LindbladModel, spectral: &SpectralData, m: Option<usize>) -> Result<MetaDecomposition> {
    metastable_analysis_with(model, spectral, m, &Tolerances::default())
}

pub fn metastable_analysis_with(
    model: &LindbladModel,
    spectral: &SpectralData,
    m: Option<usize>,
    tol: &Tolerances,
) -> Result<MetaDecomposition> {
    let n = spectral.len();
    let (m, ratio) = match m {
        Some(m) if m >= 2 && m < n => (m, ratio_at(&spectral.values, m)),
        Some(m) => return Err(Error::InvalidInput(format!("slow-mode count {m} outside 2..{n}"))),
        None => choose_slow_modes(spectral).ok_or_else(|| Error::InvalidInput("spectrum too small".into()))?,
    };
    if ratio < tol.gap_ratio {
        return Err(Error::NoGap { m, ratio });
    }
    let tau_s = -1.0 / spectral.values[m - 1].re;
    let tau_f = -1.0 / spectral.values[m].re;
    let phases = if m == 2 { PhaseStructure::TwoPhase(two_phase(model, spectral)?) } else { PhaseStructure::NotClassical };
    Ok(MetaDecomposition { m, tau_s, tau_f, gap_ratio: ratio, phases })
}

fn two_phase(model: &LindbladModel, spectral: &SpectralData) -> Result<TwoPhase> {
    let d = spectral.dim();
    if spectral.values[1].im.abs() > 1e-9 * spectral.values[1].norm().max(1.0) {
        return Err(Error::InvalidInput("second Liouvillian eigenvalue is not real".into()));
    }
    let l2 = spectral.left[1].hermitian_part();
    let r2 = &spectral.right[1];
    let alphas = hermitian_eigenvalues(&l2)?;
    let alpha_min = alphas[0];
    let alpha_max = alphas[alphas.len() - 1];
    let delta = alpha_max - alpha_min;
    if delta <= 0.0 {
        return Err(Error::InvalidInput("second left eigenmatrix is proportional to the identity".into()));
    }
    let id = CMatrix::identity(d);
    let ss = spectral.steady_state();
    let rho_max = (ss + &r2.scale_real(alpha_max)).hermitian_part();
    let rho_min = (ss + &r2.scale_real(alpha_min)).hermitian_part();
    let p_max = (&l2 - &id.scale_real(alpha_min)).scale_real(1.0 / delta);
    let p_min = &id - &p_max;
    let swapped = model.activity(&rho_min) > model.activity(&rho_max);
    Ok(if swapped {
        TwoPhase { rho_a: rho_min, rho_b: rho_max, p_a: p_min, p_b: p_max, alpha_min, alpha_max, swapped }
    } else {
        TwoPhase { rho_a: rho_max, rho_b: rho_min, p_a: p_max, p_b: p_min, alpha_min, alpha_max, swapped }
    })
}

/// `(C_A, C_B) = (<psi|P_A|psi>, 1 - C_A)`, clamped into `[0, 1]`.
pub fn committor_qme(meta: &MetaDecomposition, psi: &CVector<f64>) -> Result<(f64, f64)> {
    let phases = meta.two_phase().ok_or_else(|| Error::InvalidInput("committor requires a two-phase decomposition".into()))?;
    if (psi.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidInput("state is not normalised".into()));
    }
    let c_a = phases.p_a.sandwich(psi, psi).re.clamp(0.0, 1.0);
    Ok((c_a, 1.0 - c_a))
}
