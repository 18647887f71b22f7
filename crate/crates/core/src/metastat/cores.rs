//! Core sets and phase labelling of trajectories.

use crate::error::{Error, Result};
use crate::numkernel::pure_trace_distance;
use crate::reset::ResetStructure;
use crate::unravel::TrajectoryRecord;
use crate::Vector;

#[derive(Clone, Debug)]
pub enum CoreKind {
    /// Reached whenever a jump lands on the reset point, i.e. uses one of
    /// `channels`.
    Reset { point: usize, channels: Vec<usize> },
    /// Pure states within trace distance `radius` of `center`.
    Ball { center: Vector, radius: f64 },
}

#[derive(Clone, Debug)]
pub struct CoreSetSpec {
    pub kind: CoreKind,
    pub phase: String,
}

impl CoreSetSpec {
    pub fn reset(rs: &ResetStructure, point: usize, phase: impl Into<String>) -> Result<Self> {
        if point >= rs.reset_points.len() {
            return Err(Error::BadResetIndex(point));
        }
        Ok(Self { kind: CoreKind::Reset { point, channels: rs.channels_into(point).collect() }, phase: phase.into() })
    }

    pub fn ball(center: Vector, radius: f64, phase: impl Into<String>) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidInput("core ball radius must be positive".into()));
        }
        Ok(Self { kind: CoreKind::Ball { center, radius }, phase: phase.into() })
    }

    pub fn contains_state(&self, psi: &Vector) -> bool {
        match &self.kind {
            CoreKind::Ball { center, radius } => pure_trace_distance(psi, center) <= *radius,
            CoreKind::Reset { .. } => false,
        }
    }

    pub fn hit_by_channel(&self, k: usize) -> bool {
        matches!(&self.kind, CoreKind::Reset { channels, .. } if channels.contains(&k))
    }
}

/// Index of the first core containing `psi`.
pub(crate) fn core_of_state(cores: &[CoreSetSpec], psi: &Vector) -> Option<usize> {
    cores.iter().position(|c| c.contains_state(psi))
}

/// Index of the first core reached by a jump through channel `k` landing
/// in `post`.
pub(crate) fn core_of_jump(cores: &[CoreSetSpec], k: usize, post: &Vector) -> Option<usize> {
    cores.iter().position(|c| c.hit_by_channel(k)).or_else(|| core_of_state(cores, post))
}

/// Most recently visited core at each grid time (`None` before the first
/// visit), plus the exact times at which the label changes.
#[derive(Clone, Debug)]
pub struct PhaseLabelSeries {
    pub phases: Vec<String>,
    pub times: Vec<f64>,
    pub labels: Vec<Option<usize>>,
    /// `(time, new phase)`; the first entry is the first core visit.
    pub switches: Vec<(f64, usize)>,
    pub t_final: f64,
}

impl PhaseLabelSeries {
    /// Indicator `chi_X(t_i)` for phase `x`.
    pub fn indicator(&self, x: usize) -> Vec<u8> {
        self.labels.iter().map(|l| u8::from(*l == Some(x))).collect()
    }
}

/// Labels a trajectory by the most recently visited core. Ball membership
/// is tested at the grid points and at both sides of every jump; the scan
/// is a single forward pass, so a label never depends on later data.
pub fn label_phases(record: &TrajectoryRecord, cores: &[CoreSetSpec]) -> Result<PhaseLabelSeries> {
    if cores.len() < 2 {
        return Err(Error::InvalidInput("at least two core sets are required".into()));
    }
    let mut labels = Vec::with_capacity(record.grid_times.len());
    let mut switches = Vec::new();
    let mut current: Option<usize> = None;
    let mut visit = |t: f64, hit: Option<usize>, current: &mut Option<usize>| {
        if let Some(c) = hit {
            if *current != Some(c) {
                switches.push((t, c));
                *current = Some(c);
            }
        }
    };
    let mut jump = 0;
    for (i, &t) in record.grid_times.iter().enumerate() {
        while jump < record.jump_times.len() && record.jump_times[jump] < t {
            let tj = record.jump_times[jump];
            visit(tj, core_of_state(cores, &record.pre_jump_states[jump]), &mut current);
            let k = record.jump_indices[jump];
            visit(tj, core_of_jump(cores, k, &record.post_jump_states[jump]), &mut current);
            jump += 1;
        }
        visit(t, core_of_state(cores, &record.grid_states[i]), &mut current);
        labels.push(current);
    }
    while jump < record.jump_times.len() {
        let tj = record.jump_times[jump];
        visit(tj, core_of_state(cores, &record.pre_jump_states[jump]), &mut current);
        visit(tj, core_of_jump(cores, record.jump_indices[jump], &record.post_jump_states[jump]), &mut current);
        jump += 1;
    }
    Ok(PhaseLabelSeries {
        phases: cores.iter().map(|c| c.phase.clone()).collect(),
        times: record.grid_times.clone(),
        labels,
        switches,
        t_final: record.t_final,
    })
}
