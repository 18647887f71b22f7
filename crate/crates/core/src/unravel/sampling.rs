//! Inverse-transform sampling of jump times and channels.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::error::Result;
use crate::numkernel::{bisect, Tolerances};
use crate::unravel::{EffectiveGenerator, Survival};

/// Outcome of a waiting-time draw.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum JumpTime {
    At(f64),
    /// The survival probability at `t_max` still exceeds the drawn level.
    NoJumpBefore(f64),
}

/// Independent per-trajectory stream: ChaCha8 keyed by `seed`, with the
/// trajectory index as stream number.
pub fn trajectory_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform draw on `(0, 1]`.
pub fn uniform_open0(rng: &mut impl Rng) -> f64 {
    1.0 - rng.gen::<f64>()
}

/// Solves `S(t) = u` on a bracket grown geometrically from `t0`.
pub fn solve_survival(surv: &Survival<'_>, u: f64, t0: f64, t_max: f64, rel_tol: f64) -> Result<JumpTime> {
    if u >= 1.0 {
        return Ok(JumpTime::At(0.0));
    }
    let mut lo = 0.0;
    let mut hi = t0.min(t_max).max(f64::MIN_POSITIVE);
    loop {
        if surv.eval(hi) <= u {
            break;
        }
        if hi >= t_max {
            return Ok(JumpTime::NoJumpBefore(t_max));
        }
        lo = hi;
        hi = (hi * 2.0).min(t_max);
    }
    let t = bisect(|t| surv.eval(t) - u, lo, hi, rel_tol)?;
    Ok(JumpTime::At(t))
}

/// Draws the next jump time for a trajectory currently in `psi`.
pub fn sample_jump_time(
    gen: &EffectiveGenerator,
    surv: &Survival<'_>,
    t_max: f64,
    rng: &mut impl Rng,
    tol: &Tolerances,
) -> Result<JumpTime> {
    let u = uniform_open0(rng);
    solve_survival(surv, u, gen.fast_time() / 100.0, t_max, tol.root_time)
}

/// Picks an index with probability proportional to `weights`.
pub fn pick_channel(weights: &[f64], rng: &mut impl Rng) -> usize {
    let total: f64 = weights.iter().sum();
    let target = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    for (k, w) in weights.iter().enumerate() {
        acc += w;
        if target < acc {
            return k;
        }
    }
    weights.iter().rposition(|w| *w > 0.0).unwrap_or(0)
}
