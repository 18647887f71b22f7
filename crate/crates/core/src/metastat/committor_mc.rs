//! Monte Carlo committors: which core a trajectory reaches first.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metastat::cores::{core_of_jump, CoreKind, CoreSetSpec};
use crate::numkernel::Tolerances;
use crate::reset::first_entry_time;
use crate::unravel::{jump_channel_probabilities, pick_channel, sample_jump_time, trajectory_rng, EffectiveGenerator, JumpTime};
use crate::Vector;

#[derive(Clone, Debug, Serialize)]
pub struct CommittorEstimate {
    pub phases: Vec<String>,
    /// Fraction of trajectories reaching each core first.
    pub estimate: Vec<f64>,
    /// Binomial standard error `sqrt(p (1 - p) / n)` from the estimate.
    pub stderr: Vec<f64>,
    /// Fraction that reached no core before the time limit.
    pub unresolved: f64,
    pub n: usize,
}

/// Runs one trajectory until it reaches a core or `t_max` elapses.
pub fn first_core(
    gen: &EffectiveGenerator,
    psi0: &Vector,
    cores: &[CoreSetSpec],
    t_max: f64,
    seed: u64,
    stream: u64,
) -> Result<Option<usize>> {
    let tol = Tolerances::default();
    let mut rng = trajectory_rng(seed, stream);
    let mut psi = psi0.clone();
    let mut t = 0.0;
    while t < t_max {
        let surv = gen.survival(&psi);
        let outcome = sample_jump_time(gen, &surv, t_max - t, &mut rng, &tol)?;
        let tau = match outcome {
            JumpTime::At(tau) => tau,
            JumpTime::NoJumpBefore(tm) => tm,
        };
        // earliest ball entry along the jumpless flow before the jump
        let mut entry: Option<(f64, usize)> = None;
        for (c, core) in cores.iter().enumerate() {
            if let CoreKind::Ball { center, radius } = &core.kind {
                if let Some(te) = first_entry_time(gen, &psi, center, *radius, tau)? {
                    if te <= tau && entry.is_none_or(|(best, _)| te < best) {
                        entry = Some((te, c));
                    }
                }
            }
        }
        if let Some((_, c)) = entry {
            return Ok(Some(c));
        }
        let JumpTime::At(_) = outcome else {
            return Ok(None);
        };
        let pre = surv.state(tau)?;
        let probs = jump_channel_probabilities(gen, &pre)?;
        let k = pick_channel(&probs, &mut rng);
        let post = gen.jumps()[k].matvec(&pre).normalized().ok_or(Error::AllRatesZero)?;
        if let Some(c) = core_of_jump(cores, k, &post) {
            return Ok(Some(c));
        }
        psi = post;
        t += tau;
    }
    Ok(None)
}

/// Estimates committors from `n` independent trajectories (stream `i` of
/// `seed` for trajectory `i`), truncated at `t_max`.
pub fn committor_mc(
    gen: &EffectiveGenerator,
    psi0: &Vector,
    cores: &[CoreSetSpec],
    n: usize,
    seed: u64,
    t_max: f64,
) -> Result<CommittorEstimate> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let outcomes: Vec<Option<usize>> =
        (0..n as u64).into_par_iter().map(|i| first_core(gen, psi0, cores, t_max, seed, i)).collect::<Result<_>>()?;
    let mut counts = vec![0usize; cores.len()];
    let mut unresolved = 0usize;
    for o in outcomes {
        match o {
            Some(c) => counts[c] += 1,
            None => unresolved += 1,
        }
    }
    let nf = n as f64;
    let estimate: Vec<f64> = counts.iter().map(|c| *c as f64 / nf).collect();
    let stderr = estimate.iter().map(|p| (p * (1.0 - p) / nf).sqrt()).collect();
    Ok(CommittorEstimate {
        phases: cores.iter().map(|c| c.phase.clone()).collect(),
        estimate,
        stderr,
        unresolved: unresolved as f64 / nf,
        n,
    })
}
