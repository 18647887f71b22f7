//! Deterministic evolution from a reset state between jumps.

use crate::error::{Error, Result};
use crate::numkernel::pure_trace_distance;
use crate::numkernel::Tolerances;
use crate::reset::ResetStructure;
use crate::unravel::{scaled_expansion, EffectiveGenerator};
use crate::{Vector, C64};

/// Points per decade of the geometric `tau` grid.
pub const POINTS_PER_DECADE: usize = 64;

/// The jumpless trajectory `psi_j(tau) = exp(G tau) phi_j / sqrt(S_j(tau))`
/// tabulated on a geometric grid (with `tau = 0` prepended).
#[derive(Clone, Debug)]
pub struct JumplessTrajectory {
    pub reset_index: usize,
    pub taus: Vec<f64>,
    pub states: Vec<Vector>,
    pub survival: Vec<f64>,
    /// `rates[i][k] = w_jk(taus[i])`.
    pub rates: Vec<Vec<f64>>,
    /// Arc length measured forward from the reset state.
    pub forward_length: Vec<f64>,
    /// Arc coordinate used for invariant measures: forward length for a
    /// single reset point, `forward - total` (non-positive, measured back
    /// from the asymptote) when there are several.
    pub arc_length: Vec<f64>,
    /// Forward arc length from the reset state to the asymptote.
    pub total_length: f64,
    pub phi_a: Vector,
    pub theta_a: C64,
    gen: EffectiveGenerator,
    coeffs: Vec<C64>,
    kappas: Vec<f64>,
    xis: Vec<Vector>,
}

/// Geometric grid from `tau_min` to `tau_max` with `per_decade` points per
/// decade, preceded by `0`.
pub fn geometric_grid(tau_min: f64, tau_max: f64, per_decade: usize) -> Vec<f64> {
    let decades = (tau_max / tau_min).log10().max(0.0);
    let n = (decades * per_decade as f64).ceil() as usize;
    let mut g = Vec::with_capacity(n + 2);
    g.push(0.0);
    for i in 0..=n {
        g.push(tau_min * 10f64.powf(i as f64 / per_decade as f64));
    }
    g
}

impl JumplessTrajectory {
    pub fn generator(&self) -> &EffectiveGenerator {
        &self.gen
    }

    /// Unnormalised `exp(G tau) phi_j`.
    fn raw(&self, tau: f64) -> Vector {
        self.gen.eigensystem().values.iter().zip(&self.gen.eigensystem().right).zip(&self.coeffs).fold(
            Vector::zeros(self.gen.dim()),
            |acc, ((th, r), c)| acc.axpy(*c * (*th * tau).exp(), r),
        )
    }

    pub fn state_at(&self, tau: f64) -> Result<Vector> {
        scaled_expansion(self.gen.eigensystem(), &self.coeffs, tau).normalized().ok_or(Error::AllRatesZero)
    }

    pub fn survival_at(&self, tau: f64) -> f64 {
        self.raw(tau).norm_sqr()
    }

    /// `w_jk(tau) = kappa_k |<xi_k|psi_j(tau)>|^2`, evaluated spectrally.
    pub fn rate(&self, k: usize, tau: f64) -> Result<f64> {
        let psi = self.state_at(tau)?;
        Ok(self.kappas[k] * self.xis[k].dot(&psi).norm_sqr())
    }

    /// Arc coordinate at an arbitrary `tau`, linear in `tau` between grid
    /// points and constant beyond the last one.
    pub fn arc_at(&self, tau: f64) -> f64 {
        interpolate(&self.taus, &self.arc_length, tau)
    }

    pub fn distance_to_asymptote(&self, tau: f64) -> Result<f64> {
        Ok(pure_trace_distance(&self.state_at(tau)?, &self.phi_a))
    }
}

/// Piecewise-linear interpolation of `ys` over `xs` (clamped at the ends).
pub(crate) fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if x <= xs[0] {
        return ys[0];
    }
    let n = xs.len();
    if x >= xs[n - 1] {
        return ys[n - 1];
    }
    let i = xs.partition_point(|v| *v <= x) - 1;
    let f = (x - xs[i]) / (xs[i + 1] - xs[i]);
    ys[i] + f * (ys[i + 1] - ys[i])
}

fn arc_lengths(jt: &JumplessTrajectory, taus: &[f64], refine: usize) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(taus.len());
    out.push(0.0);
    let mut acc = 0.0;
    let mut prev = jt.state_at(taus[0])?;
    for w in taus.windows(2) {
        for s in 1..=refine {
            let t = w[0] + (w[1] - w[0]) * s as f64 / refine as f64;
            let next = jt.state_at(t)?;
            acc += pure_trace_distance(&prev, &next);
            prev = next;
        }
        out.push(acc);
    }
    Ok(out)
}

/// Builds the jumpless trajectory from reset point `j`. When `tau_max` is
/// `None` it is chosen so that the tabulated state has converged onto the
/// asymptote to machine precision.
pub fn jumpless_trajectory(
    gen: &EffectiveGenerator,
    rs: &ResetStructure,
    j: usize,
    tau_max: Option<f64>,
) -> Result<JumplessTrajectory> {
    jumpless_trajectory_with(gen, rs, j, tau_max, &Tolerances::default())
}

pub fn jumpless_trajectory_with(
    gen: &EffectiveGenerator,
    rs: &ResetStructure,
    j: usize,
    tau_max: Option<f64>,
    tol: &Tolerances,
) -> Result<JumplessTrajectory> {
    let phi = rs.reset_points.get(j).ok_or(Error::BadResetIndex(j))?;
    let eig = gen.eigensystem();
    let coeffs = eig.coefficients(phi);
    let cmax = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let a = coeffs.iter().position(|c| c.norm() > 1e-12 * cmax).unwrap_or(0);
    let theta_a = eig.values[a];
    let phi_a = eig.right[a].normalized().ok_or(Error::AllRatesZero)?.with_canonical_phase();
    // complex partners of theta_a share its decay rate and never die out;
    // convergence is governed by the next distinct real part
    let scale = theta_a.norm().max(1.0);
    let gap = eig
        .values
        .iter()
        .zip(&coeffs)
        .filter(|(v, c)| c.norm() > 1e-12 * cmax && theta_a.re - v.re > 1e-12 * scale)
        .map(|(v, _)| theta_a.re - v.re)
        .fold(f64::INFINITY, f64::min);
    let tau_min = 1e-3 * gen.fast_time();
    let tau_max = match tau_max {
        Some(t) => t,
        None if gap.is_finite() && gap > 0.0 => {
            let spread = (cmax / coeffs[a].norm()).ln().max(0.0);
            (spread + 40.0) / gap
        }
        None => 1e3 * gen.fast_time(),
    };
    let taus = geometric_grid(tau_min, tau_max.max(tau_min * 10.0), POINTS_PER_DECADE);
    let mut jt = JumplessTrajectory {
        reset_index: j,
        taus: Vec::new(),
        states: Vec::new(),
        survival: Vec::new(),
        rates: Vec::new(),
        forward_length: Vec::new(),
        arc_length: Vec::new(),
        total_length: 0.0,
        phi_a,
        theta_a,
        gen: gen.clone(),
        coeffs,
        kappas: rs.channels.iter().map(|c| c.kappa).collect(),
        xis: rs.channels.iter().map(|c| c.xi.clone()).collect(),
    };
    for &t in &taus {
        let s = jt.state_at(t)?;
        jt.rates.push(jt.kappas.iter().zip(&jt.xis).map(|(kp, xi)| kp * xi.dot(&s).norm_sqr()).collect());
        jt.survival.push(jt.survival_at(t));
        jt.states.push(s);
    }
    // refine until the total arc length is stable
    let mut refine = 1;
    let mut ell = arc_lengths(&jt, &taus, refine)?;
    loop {
        refine *= 2;
        let finer = arc_lengths(&jt, &taus, refine)?;
        let total = *finer.last().unwrap();
        let change = (total - ell.last().unwrap()).abs() / total.max(1e-300);
        ell = finer;
        if change < tol.arc_length || refine >= 256 {
            break;
        }
    }
    let tail = pure_trace_distance(jt.states.last().unwrap(), &jt.phi_a);
    jt.total_length = ell.last().unwrap() + tail;
    jt.arc_length = if rs.reset_points.len() > 1 {
        ell.iter().map(|l| l - jt.total_length).collect()
    } else {
        ell.clone()
    };
    jt.forward_length = ell;
    jt.taus = taus;
    Ok(jt)
}

/// `w_jk(tau)` for the trajectory from reset point `jt.reset_index`.
pub fn semi_markov_rate(jt: &JumplessTrajectory, k: usize, tau: f64) -> Result<f64> {
    if tau < 0.0 {
        return Err(Error::InvalidInput("tau must be non-negative".into()));
    }
    jt.rate(k, tau)
}
