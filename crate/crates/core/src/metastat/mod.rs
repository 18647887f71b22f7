//! Trajectory statistics: core-set phase labels, Monte Carlo committors,
//! invariant measures and transition rates.

mod committor_mc;
mod cores;
mod histogram;
mod rates;

pub use committor_mc::{committor_mc, first_core, CommittorEstimate};
pub use cores::{label_phases, CoreKind, CoreSetSpec, PhaseLabelSeries};
pub use histogram::{
    count_modes, find_peaks, invariant_measures, path_from_record, smooth, Histogram, HistogramSpec,
    HistogramVariable, Partition, MIN_EVENTS,
};
pub use rates::{transition_rates, DirectionalRate, TransitionRates, MIN_TRANSITIONS};
