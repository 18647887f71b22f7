//! Splitting probabilities of the first jump and reset-based committors.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{integrate, integrate_to_infinity, pure_trace_distance, solve_sylvester_with, KernelError, Tolerances};
use crate::reset::ResetStructure;
use crate::unravel::EffectiveGenerator;
use crate::{Matrix, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplittingMethod {
    Sylvester,
    Quadrature,
}

impl SplittingMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SplittingMethod::Sylvester => "sylvester",
            SplittingMethod::Quadrature => "quadrature",
        }
    }
}

/// `P(k | psi0)` for the first jump, plus the probability of never jumping.
#[derive(Clone, Debug, Serialize)]
pub struct Splitting {
    pub per_channel: Vec<f64>,
    pub never: f64,
    pub method: SplittingMethod,
    /// Set when the Sylvester pencil was singular and quadrature with a
    /// finite cutoff was used instead.
    pub fallback: bool,
}

fn check_state(gen: &EffectiveGenerator, psi0: &Vector) -> Result<()> {
    if psi0.len() != gen.dim() {
        return Err(Error::DimensionMismatch { expected: gen.dim(), found: psi0.len() });
    }
    if (psi0.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidInput("state is not normalised".into()));
    }
    Ok(())
}

/// `X = int_0^inf exp(G t) psi psi^dag exp(G^dag t) dt` from
/// `G X + X G^dag = -psi psi^dag`.
pub fn occupation_operator(gen: &EffectiveGenerator, psi0: &Vector, tol: &Tolerances) -> Result<Matrix, KernelError> {
    let g = gen.matrix();
    solve_sylvester_with(g, &g.adjoint(), &psi0.projector().scale_real(-1.0), tol)
}

fn from_occupation(gen: &EffectiveGenerator, x: &Matrix) -> Vec<f64> {
    gen.jumps().iter().map(|j| j.matmul(x).matmul(&j.adjoint()).trace().re.max(0.0)).collect()
}

pub fn splitting_probabilities(gen: &EffectiveGenerator, psi0: &Vector) -> Result<Splitting> {
    splitting_probabilities_with(gen, psi0, &Tolerances::default())
}

/// Closed-form splitting probabilities; falls back to quadrature up to
/// `1e4` slow times of `G` if the pencil is singular (a dark state).
pub fn splitting_probabilities_with(gen: &EffectiveGenerator, psi0: &Vector, tol: &Tolerances) -> Result<Splitting> {
    check_state(gen, psi0)?;
    match occupation_operator(gen, psi0, tol) {
        Ok(x) => {
            let p = from_occupation(gen, &x);
            let never = (1.0 - p.iter().sum::<f64>()).max(0.0);
            Ok(Splitting { per_channel: p, never, method: SplittingMethod::Sylvester, fallback: false })
        }
        Err(KernelError::SingularPencil { .. }) => {
            let mut s = splitting_by_quadrature(gen, psi0, 1e4 * gen.slow_time(), tol)?;
            s.fallback = true;
            Ok(s)
        }
        Err(e) => Err(e.into()),
    }
}

/// `P(k) = int_0^cutoff ||J_k exp(G t) psi0||^2 dt` by adaptive quadrature on
/// geometric panels; the tail is bounded by the survival probability.
pub fn splitting_by_quadrature(gen: &EffectiveGenerator, psi0: &Vector, cutoff: f64, tol: &Tolerances) -> Result<Splitting> {
    check_state(gen, psi0)?;
    let surv = gen.survival(psi0);
    let mut per_channel = Vec::with_capacity(gen.jumps().len());
    for j in gen.jumps() {
        let q = integrate_to_infinity(
            |t| j.matvec(&surv.unnormalised(t)).norm_sqr(),
            0.0,
            gen.fast_time(),
            cutoff,
            tol.quadrature,
            |t| surv.eval(t),
        )?;
        per_channel.push(q.value.max(0.0));
    }
    let never = (1.0 - per_channel.iter().sum::<f64>()).max(0.0);
    Ok(Splitting { per_channel, never, method: SplittingMethod::Quadrature, fallback: false })
}

/// Committor to each phase: probability that the first jump lands in that
/// phase's reset core, `C_X = sum_{k: phase(k) = X} P(k)`.
pub fn committor_reset(splitting: &Splitting, phase_of_channel: &[usize], n_phases: usize) -> Vec<f64> {
    let mut c = vec![0.0; n_phases];
    for (p, ph) in splitting.per_channel.iter().zip(phase_of_channel) {
        c[*ph] += p;
    }
    c
}

/// Committor of the single-jump model with a dark core ball.
#[derive(Clone, Debug, Serialize)]
pub struct SingleResetCommittor {
    pub bright: f64,
    pub dark: f64,
    /// First entry time of the jumpless flow into the dark ball.
    pub tau_hit: Option<f64>,
    /// `false` when the flow never entered the ball before `tau_max`; then
    /// `dark` is the residual survival probability.
    pub hits: bool,
}

/// First time the normalised flow `exp(G t) psi0` enters the ball.
pub fn first_entry_time(gen: &EffectiveGenerator, psi0: &Vector, center: &Vector, radius: f64, tau_max: f64) -> Result<Option<f64>> {
    let surv = gen.survival(psi0);
    let dist = |t: f64| -> Result<f64> { Ok(pure_trace_distance(&surv.state(t)?, center)) };
    if dist(0.0)? <= radius {
        return Ok(Some(0.0));
    }
    let grid = crate::reset::geometric_grid(1e-3 * gen.fast_time(), tau_max, crate::reset::POINTS_PER_DECADE);
    let mut prev = 0.0;
    for &t in &grid[1..] {
        if dist(t)? <= radius {
            let mut lo = prev;
            let mut hi = t;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if dist(mid)? <= radius {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo <= 1e-12 * hi {
                    break;
                }
            }
            return Ok(Some(hi));
        }
        prev = t;
    }
    Ok(None)
}

/// `C_D = S(tau_hit)`, `C_B = int_0^{tau_hit} ||J exp(G t) psi0||^2 dt`.
pub fn committor_single_reset(
    gen: &EffectiveGenerator,
    rs: &ResetStructure,
    psi0: &Vector,
    center: &Vector,
    radius: f64,
    tau_max: f64,
) -> Result<SingleResetCommittor> {
    check_state(gen, psi0)?;
    if rs.channels.len() != 1 {
        return Err(Error::InvalidInput("single-reset committor needs exactly one jump operator".into()));
    }
    let surv = gen.survival(psi0);
    let j = &gen.jumps()[0];
    let integral = |upper: f64| -> Result<f64> {
        if upper == 0.0 {
            return Ok(0.0);
        }
        // split at multiples of the fast time to keep panels well resolved
        let mut total = 0.0;
        let mut a = 0.0;
        let mut width = gen.fast_time();
        while a < upper {
            let b = (a + width).min(upper);
            total += integrate(|t| j.matvec(&surv.unnormalised(t)).norm_sqr(), a, b, 1e-12)?.value;
            a = b;
            width *= 2.0;
        }
        Ok(total)
    };
    match first_entry_time(gen, psi0, center, radius, tau_max)? {
        Some(tau) => {
            let dark = surv.eval(tau);
            let bright = integral(tau)?;
            Ok(SingleResetCommittor { bright, dark, tau_hit: Some(tau), hits: true })
        }
        None => {
            let dark = surv.eval(tau_max);
            Ok(SingleResetCommittor { bright: integral(tau_max)?, dark, tau_hit: None, hits: false })
        }
    }
}
