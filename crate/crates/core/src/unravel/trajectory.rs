//! Quantum-jump trajectories and ensemble averages.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{CMatrix, CVector, Tolerances};
use crate::unravel::{jump_channel_probabilities, pick_channel, sample_jump_time, trajectory_rng, EffectiveGenerator, JumpTime};
use crate::{Matrix, Vector, C64};

/// One unravelled trajectory: the jump record plus conditional states on a
/// uniform grid `t_i = i * dt`, `0 <= t_i <= T`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRecord {
    pub seed: u64,
    pub stream: u64,
    pub t_final: f64,
    pub dt: f64,
    pub jump_times: Vec<f64>,
    pub jump_indices: Vec<usize>,
    /// Conditional state just before each jump.
    pub pre_jump_states: Vec<Vector>,
    /// Conditional state just after each jump.
    pub post_jump_states: Vec<Vector>,
    pub grid_times: Vec<f64>,
    pub grid_states: Vec<Vector>,
    pub final_state: Vector,
}

/// JSON sidecar accompanying the state CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySidecar {
    pub seed: u64,
    pub stream: u64,
    pub t_final: f64,
    pub dt: f64,
    pub jump_times: Vec<f64>,
    pub jump_indices: Vec<usize>,
}

/// Uniform output grid `0, dt, 2 dt, ...` up to `t_final`.
pub fn output_grid(t_final: f64, dt: f64) -> Vec<f64> {
    let n = (t_final / dt * (1.0 + 1e-12)).floor() as usize;
    (0..=n).map(|i| i as f64 * dt).collect()
}

fn check_state(psi: &Vector, dim: usize) -> Result<()> {
    if psi.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: psi.len() });
    }
    if (psi.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidInput("initial state is not normalised".into()));
    }
    Ok(())
}

/// Simulates one trajectory on `[0, t_final]`, using stream `stream` of
/// `seed`.
pub fn simulate_trajectory(
    gen: &EffectiveGenerator,
    psi0: &Vector,
    t_final: f64,
    dt: f64,
    seed: u64,
    stream: u64,
) -> Result<TrajectoryRecord> {
    simulate_trajectory_with(gen, psi0, t_final, dt, seed, stream, &Tolerances::default())
}

pub fn simulate_trajectory_with(
    gen: &EffectiveGenerator,
    psi0: &Vector,
    t_final: f64,
    dt: f64,
    seed: u64,
    stream: u64,
    tol: &Tolerances,
) -> Result<TrajectoryRecord> {
    check_state(psi0, gen.dim())?;
    if !(t_final > 0.0 && dt > 0.0) {
        return Err(Error::InvalidInput("T and dt must be positive".into()));
    }
    let mut rng = trajectory_rng(seed, stream);
    let grid_times = output_grid(t_final, dt);
    let mut grid_states = Vec::with_capacity(grid_times.len());
    let mut rec = TrajectoryRecord {
        seed,
        stream,
        t_final,
        dt,
        jump_times: Vec::new(),
        jump_indices: Vec::new(),
        pre_jump_states: Vec::new(),
        post_jump_states: Vec::new(),
        grid_times: Vec::new(),
        grid_states: Vec::new(),
        final_state: psi0.clone(),
    };
    let mut t = 0.0;
    let mut psi = psi0.clone();
    let mut next_grid = 0;
    loop {
        let surv = gen.survival(&psi);
        let outcome = sample_jump_time(gen, &surv, t_final - t, &mut rng, tol)?;
        let (t_end, jumped) = match outcome {
            JumpTime::At(tau) if t + tau <= t_final => (t + tau, true),
            _ => (t_final, false),
        };
        while next_grid < grid_times.len() && (grid_times[next_grid] < t_end || (!jumped && grid_times[next_grid] <= t_end)) {
            grid_states.push(surv.state(grid_times[next_grid] - t)?);
            next_grid += 1;
        }
        let pre = surv.state(t_end - t)?;
        if !jumped {
            rec.final_state = pre;
            break;
        }
        let probs = jump_channel_probabilities(gen, &pre)?;
        let k = pick_channel(&probs, &mut rng);
        let post = gen.jumps()[k].matvec(&pre).normalized().ok_or(Error::AllRatesZero)?;
        rec.jump_times.push(t_end);
        rec.jump_indices.push(k);
        rec.pre_jump_states.push(pre);
        rec.post_jump_states.push(post.clone());
        psi = post;
        t = t_end;
    }
    // a jump landing exactly on t_final leaves the last grid point unfilled
    while grid_states.len() < grid_times.len() {
        grid_states.push(psi.clone());
    }
    rec.grid_times = grid_times;
    rec.grid_states = grid_states;
    Ok(rec)
}

/// Runs `n` independent trajectories in parallel; trajectory `i` uses
/// stream `i`, so the result does not depend on the thread count.
pub fn simulate_ensemble(
    gen: &EffectiveGenerator,
    psi0: &Vector,
    t_final: f64,
    dt: f64,
    n: usize,
    seed: u64,
) -> Result<Vec<TrajectoryRecord>> {
    (0..n as u64).into_par_iter().map(|i| simulate_trajectory(gen, psi0, t_final, dt, seed, i)).collect()
}

/// Mean of `psi psi^dag` per grid point with per-entry standard errors
/// (real and imaginary parts estimated separately and stored as the real
/// and imaginary parts of `stderr`).
#[derive(Clone, Debug)]
pub struct EnsembleAverage {
    pub times: Vec<f64>,
    pub mean: Vec<Matrix>,
    pub stderr: Vec<Matrix>,
    pub count: usize,
}

pub fn ensemble_average(records: &[TrajectoryRecord]) -> Result<EnsembleAverage> {
    let first = records.first().ok_or(Error::EmptyEnsemble)?;
    let times = first.grid_times.clone();
    if records.iter().any(|r| r.grid_times != times) {
        return Err(Error::GridMismatch);
    }
    let d = first.final_state.len();
    let n = records.len() as f64;
    let mut mean = Vec::with_capacity(times.len());
    let mut stderr = Vec::with_capacity(times.len());
    for i in 0..times.len() {
        let mut sum = CMatrix::<f64>::zeros(d, d);
        let mut sq_re = vec![0.0; d * d];
        let mut sq_im = vec![0.0; d * d];
        for r in records {
            let rho = r.grid_states[i].projector();
            for a in 0..d {
                for b in 0..d {
                    let z = rho[(a, b)];
                    sq_re[a * d + b] += z.re * z.re;
                    sq_im[a * d + b] += z.im * z.im;
                }
            }
            sum += &rho;
        }
        let m = sum.scale_real(1.0 / n);
        let se = CMatrix::from_fn(d, d, |a, b| {
            let mu = m[(a, b)];
            let se_of = |sq: f64, mu: f64| {
                if records.len() < 2 {
                    0.0
                } else {
                    ((sq / n - mu * mu).max(0.0) * n / (n - 1.0) / n).sqrt()
                }
            };
            C64::new(se_of(sq_re[a * d + b], mu.re), se_of(sq_im[a * d + b], mu.im))
        });
        mean.push(m);
        stderr.push(se);
    }
    Ok(EnsembleAverage { times, mean, stderr, count: records.len() })
}

impl TrajectoryRecord {
    pub fn sidecar(&self) -> TrajectorySidecar {
        TrajectorySidecar {
            seed: self.seed,
            stream: self.stream,
            t_final: self.t_final,
            dt: self.dt,
            jump_times: self.jump_times.clone(),
            jump_indices: self.jump_indices.clone(),
        }
    }

    /// CSV with columns `t, re_0, im_0, re_1, im_1, ...`.
    pub fn write_states_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let d = self.final_state.len();
        let mut header = vec!["t".to_string()];
        for k in 0..d {
            header.push(format!("re_{k}"));
            header.push(format!("im_{k}"));
        }
        w.write_record(&header)?;
        for (t, psi) in self.grid_times.iter().zip(&self.grid_states) {
            let mut row = vec![t.to_string()];
            for z in psi.iter() {
                row.push(z.re.to_string());
                row.push(z.im.to_string());
            }
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes `<stem>.csv` and `<stem>.json` into `dir`.
    pub fn write_files(&self, dir: &Path, stem: &str) -> Result<(std::path::PathBuf, std::path::PathBuf)> {
        let csv_path = dir.join(format!("{stem}.csv"));
        let json_path = dir.join(format!("{stem}.json"));
        self.write_states_csv(std::fs::File::create(&csv_path)?)?;
        std::fs::write(&json_path, serde_json::to_string_pretty(&self.sidecar())?)?;
        Ok((csv_path, json_path))
    }
}

/// Reads a state CSV written by [`TrajectoryRecord::write_states_csv`].
pub fn read_states_csv(text: &str) -> Result<(Vec<f64>, Vec<CVector<f64>>)> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let mut times = Vec::new();
    let mut states = Vec::new();
    for row in r.records() {
        let row = row?;
        let vals: Vec<f64> = row
            .iter()
            .map(|s| s.parse::<f64>().map_err(|e| Error::InvalidInput(e.to_string())))
            .collect::<Result<_>>()?;
        times.push(vals[0]);
        states.push(CVector::from_vec(vals[1..].chunks(2).map(|c| C64::new(c[0], c[1])).collect()));
    }
    Ok((times, states))
}
