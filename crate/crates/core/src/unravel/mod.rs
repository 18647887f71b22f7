//! Quantum-jump unravelling of arbitrary Lindblad models.

mod generator;
mod sampling;
mod trajectory;

pub use generator::{effective_generator, jump_channel_probabilities, EffectiveGenerator, Survival};
pub(crate) use generator::scaled_expansion;
pub use sampling::{pick_channel, sample_jump_time, solve_survival, trajectory_rng, uniform_open0, JumpTime};
pub use trajectory::{
    ensemble_average, output_grid, read_states_csv, simulate_ensemble, simulate_trajectory, simulate_trajectory_with,
    EnsembleAverage, TrajectoryRecord, TrajectorySidecar,
};
