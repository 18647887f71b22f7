//! Rank-one factorisation `J_k = sqrt(kappa_k) |phi_k><xi_k|`.

use crate::error::{Error, Result};
use crate::numkernel::pure_trace_distance;
use crate::numkernel::Tolerances;
use crate::{Matrix, Vector};

#[derive(Clone, Debug)]
pub struct ResetChannel {
    pub kappa: f64,
    /// Reset state (jump destination), canonical phase.
    pub phi: Vector,
    pub xi: Vector,
    /// Index of `phi` in [`ResetStructure::reset_points`].
    pub point: usize,
}

#[derive(Clone, Debug)]
pub struct ResetStructure {
    pub channels: Vec<ResetChannel>,
    /// Distinct reset states, in order of first appearance.
    pub reset_points: Vec<Vector>,
}

impl ResetStructure {
    /// Channels whose destination is reset point `j`.
    pub fn channels_into(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        self.channels.iter().enumerate().filter(move |(_, c)| c.point == j).map(|(k, _)| k)
    }

    /// Maps each channel to the phase of its destination, given a phase per
    /// reset point.
    pub fn phase_map(&self, point_phase: &[usize]) -> Vec<usize> {
        self.channels.iter().map(|c| point_phase[c.point]).collect()
    }
}

fn factor(j: &Matrix, index: usize, tol: &Tolerances) -> Result<(f64, Vector, Vector)> {
    let d = j.rows();
    let norm = j.frobenius_norm();
    if norm == 0.0 {
        return Err(Error::ZeroJump { index });
    }
    let best = (0..d).max_by(|&a, &b| j.column(a).norm().partial_cmp(&j.column(b).norm()).unwrap()).unwrap_or(0);
    let phi = j.column(best).normalized().ok_or(Error::ZeroJump { index })?.with_canonical_phase();
    // row vector phi^dag J, stored as the column J^dag phi
    let row = j.adjoint().matvec(&phi);
    let residual = (j - &phi.outer(&row)).frobenius_norm() / norm;
    if residual > tol.rank_one {
        return Err(Error::NotResetProcess { index, residual });
    }
    let kappa = row.norm_sqr();
    let xi = row.scale_real(1.0 / kappa.sqrt());
    Ok((kappa, phi, xi))
}

pub fn detect_reset_structure(jumps: &[Matrix]) -> Result<ResetStructure> {
    detect_reset_structure_with(jumps, &Tolerances::default())
}

pub fn detect_reset_structure_with(jumps: &[Matrix], tol: &Tolerances) -> Result<ResetStructure> {
    let mut channels = Vec::with_capacity(jumps.len());
    let mut points: Vec<Vector> = Vec::new();
    for (k, j) in jumps.iter().enumerate() {
        let (kappa, phi, xi) = factor(j, k, tol)?;
        let point = match points.iter().position(|p| pure_trace_distance(p, &phi) < tol.reset_dedup) {
            Some(i) => i,
            None => {
                points.push(phi.clone());
                points.len() - 1
            }
        };
        channels.push(ResetChannel { kappa, phi, xi, point });
    }
    Ok(ResetStructure { channels, reset_points: points })
}
