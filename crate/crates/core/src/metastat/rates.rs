//! Transition rates between phases from labelled trajectories.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metastat::PhaseLabelSeries;

/// Fewest observed transitions for a rate estimate.
pub const MIN_TRANSITIONS: usize = 10;

#[derive(Clone, Debug, Serialize)]
pub struct DirectionalRate {
    pub from: String,
    pub to: String,
    pub count: usize,
    /// Total time labelled with the source phase.
    pub time_in_source: f64,
    pub rate: f64,
    /// Poisson standard error `sqrt(count) / time_in_source`.
    pub stderr: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransitionRates {
    pub phases: Vec<String>,
    pub rates: Vec<DirectionalRate>,
    /// Mean length of the completed stays in each phase (`NaN` if none).
    pub mean_dwell: Vec<f64>,
    pub occupation: Vec<f64>,
    /// Sum of all directional rates.
    pub total_rate: f64,
    pub transitions: usize,
}

/// Pools the label switches of several trajectories. Time before the
/// first core visit is not attributed to any phase, and the stay running
/// at the end of a trajectory is excluded from the dwell means.
pub fn transition_rates(series: &[PhaseLabelSeries]) -> Result<TransitionRates> {
    let first = series.first().ok_or(Error::EmptyEnsemble)?;
    let n = first.phases.len();
    if series.iter().any(|s| s.phases != first.phases) {
        return Err(Error::InvalidInput("label series use different core sets".into()));
    }
    let mut counts = vec![vec![0usize; n]; n];
    let mut occupation = vec![0.0; n];
    let mut dwell_sum = vec![0.0; n];
    let mut dwell_n = vec![0usize; n];
    for s in series {
        for (w, next) in s.switches.iter().zip(s.switches.iter().skip(1).map(Some).chain(std::iter::once(None))) {
            let (t, p) = *w;
            let end = next.map_or(s.t_final, |n| n.0);
            occupation[p] += end - t;
            if let Some(&(_, q)) = next {
                counts[p][q] += 1;
                dwell_sum[p] += end - t;
                dwell_n[p] += 1;
            }
        }
    }
    let transitions: usize = counts.iter().flatten().sum();
    if transitions < MIN_TRANSITIONS {
        return Err(Error::TooFewTransitions { found: transitions, needed: MIN_TRANSITIONS });
    }
    let mut rates = Vec::new();
    for p in 0..n {
        for q in (0..n).filter(|q| *q != p) {
            let c = counts[p][q];
            let tp = occupation[p];
            let (rate, stderr) = if tp > 0.0 { (c as f64 / tp, (c as f64).sqrt() / tp) } else { (f64::NAN, f64::NAN) };
            rates.push(DirectionalRate {
                from: first.phases[p].clone(),
                to: first.phases[q].clone(),
                count: c,
                time_in_source: tp,
                rate,
                stderr,
            });
        }
    }
    Ok(TransitionRates {
        phases: first.phases.clone(),
        total_rate: rates.iter().map(|r| r.rate).filter(|r| r.is_finite()).sum(),
        rates,
        mean_dwell: dwell_sum.iter().zip(&dwell_n).map(|(s, c)| if *c > 0 { s / *c as f64 } else { f64::NAN }).collect(),
        occupation,
        transitions,
    })
}
