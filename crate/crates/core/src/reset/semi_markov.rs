//! Semi-Markov representation: reset index plus time since the last jump.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::Tolerances;
use crate::reset::{JumplessTrajectory, ResetStructure};
use crate::unravel::{pick_channel, solve_survival, uniform_open0, EffectiveGenerator, JumpTime};

/// One jump of the semi-Markov chain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemiMarkovJump {
    /// Absolute time of the jump.
    pub time: f64,
    /// Waiting time since the previous jump (or the start).
    pub tau: f64,
    /// Reset point the system jumped from.
    pub from: usize,
    /// Channel used.
    pub channel: usize,
    /// Destination reset point.
    pub to: usize,
}

/// Jump sequence on `[0, t_final]` started at reset point `j0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemiMarkovPath {
    pub start: usize,
    pub t_final: f64,
    pub jumps: Vec<SemiMarkovJump>,
}

impl SemiMarkovPath {
    /// Reset point occupied at time `t`, with the time since the last jump.
    pub fn state_at(&self, t: f64) -> (usize, f64) {
        let idx = self.jumps.partition_point(|e| e.time <= t);
        if idx == 0 {
            (self.start, t)
        } else {
            let e = &self.jumps[idx - 1];
            (e.to, t - e.time)
        }
    }
}

/// Draws `(tau, channel)` for the next jump from reset point `j`.
pub fn sample_next_jump(
    gen: &EffectiveGenerator,
    jt: &JumplessTrajectory,
    t_max: f64,
    rng: &mut impl Rng,
    tol: &Tolerances,
) -> Result<Option<(f64, usize)>> {
    let phi = &jt.states[0];
    let surv = gen.survival(phi);
    let u = uniform_open0(rng);
    match solve_survival(&surv, u, gen.fast_time() / 100.0, t_max, tol.root_time)? {
        JumpTime::NoJumpBefore(_) => Ok(None),
        JumpTime::At(tau) => {
            let psi = surv.state(tau)?;
            let rates = gen.jump_rates(&psi);
            if rates.iter().sum::<f64>() < 1e-300 {
                return Err(Error::AllRatesZero);
            }
            Ok(Some((tau, pick_channel(&rates, rng))))
        }
    }
}

/// Samples the semi-Markov chain. `jts[j]` must be the jumpless trajectory
/// from reset point `j`.
pub fn sample_semi_markov(
    gen: &EffectiveGenerator,
    rs: &ResetStructure,
    jts: &[JumplessTrajectory],
    j0: usize,
    t_final: f64,
    rng: &mut impl Rng,
) -> Result<SemiMarkovPath> {
    if j0 >= rs.reset_points.len() || jts.len() != rs.reset_points.len() {
        return Err(Error::BadResetIndex(j0));
    }
    let tol = Tolerances::default();
    let mut path = SemiMarkovPath { start: j0, t_final, jumps: Vec::new() };
    let mut t = 0.0;
    let mut j = j0;
    while let Some((tau, k)) = sample_next_jump(gen, &jts[j], t_final - t, rng, &tol)? {
        if t + tau > t_final {
            break;
        }
        t += tau;
        let to = rs.channels[k].point;
        path.jumps.push(SemiMarkovJump { time: t, tau, from: j, channel: k, to });
        j = to;
    }
    Ok(path)
}
