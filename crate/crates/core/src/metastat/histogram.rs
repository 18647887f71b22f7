//! Time-weighted invariant measures of the semi-Markov chain over
//! `log10 tau` and over the arc coordinate `ell`.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::reset::{JumplessTrajectory, ResetStructure, SemiMarkovJump, SemiMarkovPath};
use crate::unravel::TrajectoryRecord;

/// Minimum number of jumps after burn-in for a histogram.
pub const MIN_EVENTS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HistogramVariable {
    /// `log10 tau`, time since the last jump.
    LogTau,
    /// Arc coordinate `ell` along the jumpless trajectory.
    Arc,
}

/// Histogram restricted to one reset point.
#[derive(Clone, Debug, Serialize)]
pub struct Partition {
    pub reset_index: usize,
    /// Fraction of the total observed time per unit of the variable; the
    /// densities of all partitions together integrate to one.
    pub density: Vec<f64>,
    /// Jumps whose pre-jump value of the variable falls in the bin.
    pub count: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Histogram {
    pub variable: HistogramVariable,
    pub edges: Vec<f64>,
    pub partitions: Vec<Partition>,
    /// Observed time represented by the histogram.
    pub total_time: f64,
    /// Observed time outside the binned range.
    pub excluded_time: f64,
    pub events: usize,
}

impl Histogram {
    pub fn bins(&self) -> usize {
        self.edges.len() - 1
    }

    /// `sum_p sum_i density * width`; one up to rounding.
    pub fn integral(&self) -> f64 {
        self.partitions
            .iter()
            .flat_map(|p| p.density.iter().zip(self.edges.windows(2)).map(|(d, w)| d * (w[1] - w[0])))
            .sum()
    }

    /// Sum of the partition densities, bin by bin.
    pub fn combined_density(&self) -> Vec<f64> {
        (0..self.bins()).map(|i| self.partitions.iter().map(|p| p.density[i]).sum()).collect()
    }

    /// Columns `bin_lo, bin_hi, density, count, partition`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["bin_lo", "bin_hi", "density", "count", "partition"])?;
        for p in &self.partitions {
            for (i, e) in self.edges.windows(2).enumerate() {
                w.write_record([
                    e[0].to_string(),
                    e[1].to_string(),
                    p.density[i].to_string(),
                    p.count[i].to_string(),
                    p.reset_index.to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HistogramSpec {
    pub bins: usize,
    /// Time discarded at the start of every path.
    pub burn_in: f64,
}

impl Default for HistogramSpec {
    fn default() -> Self {
        Self { bins: 40, burn_in: 0.0 }
    }
}

/// Time spent at reset point `point` with `tau` in `[tau_lo, tau_hi]`.
struct Segment {
    point: usize,
    tau_lo: f64,
    tau_hi: f64,
}

fn segments(paths: &[SemiMarkovPath], burn_in: f64) -> (Vec<Segment>, Vec<&SemiMarkovJump>) {
    let mut segs = Vec::new();
    let mut jumps = Vec::new();
    for p in paths {
        let mut start = 0.0;
        let mut point = p.start;
        let ends = p.jumps.iter().map(|j| (j.time, Some(j))).chain(std::iter::once((p.t_final, None)));
        for (end, jump) in ends {
            if end > burn_in {
                let tau_lo = (burn_in - start).max(0.0);
                let tau_hi = end - start;
                if tau_hi > tau_lo {
                    segs.push(Segment { point, tau_lo, tau_hi });
                }
                if let Some(j) = jump {
                    jumps.push(j);
                }
            }
            if let Some(j) = jump {
                start = j.time;
                point = j.to;
            }
        }
    }
    (segs, jumps)
}

fn bin_of(edges: &[f64], x: f64) -> usize {
    let n = edges.len() - 1;
    edges.partition_point(|e| *e <= x).saturating_sub(1).min(n - 1)
}

/// Adds `weight`, spread uniformly over `[a, b]`, to the bins.
fn spread(edges: &[f64], a: f64, b: f64, weight: f64, mass: &mut [f64]) {
    if weight <= 0.0 {
        return;
    }
    if b - a <= 1e-15 * a.abs().max(b.abs()).max(1e-300) {
        mass[bin_of(edges, a)] += weight;
        return;
    }
    let (i0, i1) = (bin_of(edges, a), bin_of(edges, b));
    for i in i0..=i1 {
        let lo = if i == 0 { f64::NEG_INFINITY } else { edges[i] };
        let hi = if i == edges.len() - 2 { f64::INFINITY } else { edges[i + 1] };
        let overlap = b.min(hi) - a.max(lo);
        if overlap > 0.0 {
            mass[i] += weight * overlap / (b - a);
        }
    }
}

fn finish(
    variable: HistogramVariable,
    edges: Vec<f64>,
    mass: Vec<Vec<f64>>,
    count: Vec<Vec<usize>>,
    events: usize,
    excluded_time: f64,
) -> Histogram {
    let total: f64 = mass.iter().flatten().sum();
    let partitions = mass
        .into_iter()
        .zip(count)
        .enumerate()
        .map(|(j, (m, c))| Partition {
            reset_index: j,
            density: m.iter().zip(edges.windows(2)).map(|(m, e)| m / (total * (e[1] - e[0]))).collect(),
            count: c,
        })
        .collect();
    Histogram { variable, edges, partitions, total_time: total, excluded_time, events }
}

/// Occupation of `ell` while `tau` runs over `[a, b]` on `jt`. `ell` is
/// piecewise linear in `tau` between grid points, so within a grid cell
/// the time is spread uniformly over the `ell` interval it covers.
fn ell_occupation(jt: &JumplessTrajectory, a: f64, b: f64, edges: &[f64], mass: &mut [f64]) {
    let xs = &jt.taus;
    let last = *xs.last().unwrap();
    let start = xs.partition_point(|x| *x <= a).saturating_sub(1);
    for i in start..xs.len() - 1 {
        let (u, v) = (a.max(xs[i]), b.min(xs[i + 1]));
        if u >= b {
            break;
        }
        if v > u {
            spread(edges, jt.arc_at(u), jt.arc_at(v), v - u, mass);
        }
    }
    if b > last {
        let u = a.max(last);
        let l = *jt.arc_length.last().unwrap();
        spread(edges, l, l, b - u, mass);
    }
}

/// Time-weighted histograms of `log10 tau` and `ell`, partitioned by the
/// reset point. Needs at least [`MIN_EVENTS`] jumps after burn-in.
///
/// The `log10 tau` bins span the observed range from the shortest waiting
/// time to the longest elapsed time. The occupation below the first edge
/// (at most one shortest waiting time per stay) is reported as
/// `excluded_time` and left out of the normalisation. The `ell` bins span
/// the range of the tabulated arc coordinates and cover all time.
pub fn invariant_measures(
    paths: &[SemiMarkovPath],
    jts: &[JumplessTrajectory],
    spec: &HistogramSpec,
) -> Result<(Histogram, Histogram)> {
    if spec.bins == 0 {
        return Err(Error::InvalidInput("histogram needs at least one bin".into()));
    }
    let (segs, jumps) = segments(paths, spec.burn_in);
    if jumps.len() < MIN_EVENTS {
        return Err(Error::InsufficientData { found: jumps.len(), needed: MIN_EVENTS });
    }
    if let Some(s) = segs.iter().find(|s| s.point >= jts.len()) {
        return Err(Error::BadResetIndex(s.point));
    }
    let n_points = jts.len();
    let bins = spec.bins;

    let tau_min = jumps.iter().map(|j| j.tau).filter(|t| *t > 0.0).fold(f64::INFINITY, f64::min);
    let tau_max = segs.iter().map(|s| s.tau_hi).fold(0.0, f64::max);
    let (lo, hi) = (tau_min.log10(), tau_max.log10().max(tau_min.log10() + 1e-9));
    let edges: Vec<f64> = (0..=bins).map(|i| lo + (hi - lo) * i as f64 / bins as f64).collect();
    let mut mass = vec![vec![0.0; bins]; n_points];
    let mut count = vec![vec![0usize; bins]; n_points];
    let mut excluded = 0.0;
    for s in &segs {
        excluded += (s.tau_hi.min(tau_min) - s.tau_lo).max(0.0);
        // mass in [10^e_i, 10^e_{i+1}], the last bin open-ended
        for i in 0..bins {
            let a = if i == 0 { tau_min } else { 10f64.powf(edges[i]) };
            let b = if i == bins - 1 { f64::INFINITY } else { 10f64.powf(edges[i + 1]) };
            let overlap = s.tau_hi.min(b) - s.tau_lo.max(a);
            if overlap > 0.0 {
                mass[s.point][i] += overlap;
            }
        }
    }
    for j in &jumps {
        count[j.from][bin_of(&edges, j.tau.log10())] += 1;
    }
    if mass.iter().flatten().sum::<f64>() <= 0.0 {
        return Err(Error::InvalidInput("no observed time beyond the shortest waiting time".into()));
    }
    let log_tau = finish(HistogramVariable::LogTau, edges, mass, count, jumps.len(), excluded);

    let l_lo = jts.iter().flat_map(|jt| jt.arc_length.iter()).cloned().fold(f64::INFINITY, f64::min);
    let l_hi = jts.iter().flat_map(|jt| jt.arc_length.iter()).cloned().fold(f64::NEG_INFINITY, f64::max);
    let l_hi = l_hi.max(l_lo + 1e-12);
    let edges: Vec<f64> = (0..=bins).map(|i| l_lo + (l_hi - l_lo) * i as f64 / bins as f64).collect();
    let mut mass = vec![vec![0.0; bins]; n_points];
    let mut count = vec![vec![0usize; bins]; n_points];
    for s in &segs {
        ell_occupation(&jts[s.point], s.tau_lo, s.tau_hi, &edges, &mut mass[s.point]);
    }
    for j in &jumps {
        count[j.from][bin_of(&edges, jts[j.from].arc_at(j.tau))] += 1;
    }
    let arc = finish(HistogramVariable::Arc, edges, mass, count, jumps.len(), 0.0);
    Ok((log_tau, arc))
}

/// Converts a trajectory of a reset process into its semi-Markov jump
/// sequence. The path starts at the first jump (times are shifted so that
/// it occurs at `t = 0`); `None` if the trajectory never jumps.
pub fn path_from_record(record: &TrajectoryRecord, rs: &ResetStructure) -> Result<Option<SemiMarkovPath>> {
    let Some(&t0) = record.jump_times.first() else {
        return Ok(None);
    };
    let point = |k: usize| rs.channels.get(k).map(|c| c.point).ok_or(Error::BadResetIndex(k));
    let start = point(record.jump_indices[0])?;
    let mut jumps = Vec::with_capacity(record.jump_times.len() - 1);
    let mut from = start;
    let mut prev = t0;
    for (t, &k) in record.jump_times.iter().zip(&record.jump_indices).skip(1) {
        let to = point(k)?;
        jumps.push(SemiMarkovJump { time: t - t0, tau: t - prev, from, channel: k, to });
        from = to;
        prev = *t;
    }
    Ok(Some(SemiMarkovPath { start, t_final: record.t_final - t0, jumps }))
}

/// Moving average over `window` bins (truncated at the edges).
pub fn smooth(density: &[f64], window: usize) -> Vec<f64> {
    let h = window / 2;
    (0..density.len())
        .map(|i| {
            let lo = i.saturating_sub(h);
            let hi = (i + h + 1).min(density.len());
            density[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect()
}

/// Indices of local maxima whose topographic prominence is at least
/// `min_prominence` times the global maximum. End bins count as maxima when
/// they exceed their only neighbour.
pub fn find_peaks(values: &[f64], min_prominence: f64) -> Vec<usize> {
    let n = values.len();
    let top = values.iter().cloned().fold(0.0, f64::max);
    if n == 0 || top <= 0.0 {
        return Vec::new();
    }
    let mut peaks = Vec::new();
    let mut i = 0;
    while i < n {
        // treat a plateau as one candidate
        let mut j = i;
        while j + 1 < n && values[j + 1] == values[i] {
            j += 1;
        }
        let left_ok = i == 0 || values[i - 1] < values[i];
        let right_ok = j == n - 1 || values[j + 1] < values[i];
        if left_ok && right_ok {
            let v = values[i];
            let base = |range: &mut dyn Iterator<Item = usize>| {
                let mut m = v;
                for k in range {
                    if values[k] > v {
                        return m;
                    }
                    m = m.min(values[k]);
                }
                m
            };
            let lb = if i == 0 { f64::NEG_INFINITY } else { base(&mut (0..i).rev()) };
            let rb = if j == n - 1 { f64::NEG_INFINITY } else { base(&mut (j + 1..n)) };
            let floor = match (lb.is_finite(), rb.is_finite()) {
                (true, true) => lb.max(rb),
                (true, false) => lb,
                (false, true) => rb,
                (false, false) => 0.0,
            };
            if v - floor >= min_prominence * top {
                peaks.push(i);
            }
        }
        i = j + 1;
    }
    peaks
}

/// Peaks of a density after 3-bin smoothing at 5% prominence.
pub fn count_modes(density: &[f64]) -> usize {
    find_peaks(&smooth(density, 3), 0.05).len()
}
