//! Quantum reset processes: rank-one jumps, jumpless trajectories, the
//! semi-Markov representation and closed-form committors.

mod elbow;
mod io;
mod jumpless;
mod semi_markov;
mod splitting;
mod structure;

pub use elbow::{elbow_analysis, ElbowReport};
pub use io::{write_committor_csv, write_jumpless_csv, CommittorRow};
pub use jumpless::{geometric_grid, jumpless_trajectory, jumpless_trajectory_with, semi_markov_rate, JumplessTrajectory, POINTS_PER_DECADE};
pub use semi_markov::{sample_next_jump, sample_semi_markov, SemiMarkovJump, SemiMarkovPath};
pub use splitting::{
    committor_reset, committor_single_reset, first_entry_time, occupation_operator, splitting_by_quadrature,
    splitting_probabilities, splitting_probabilities_with, SingleResetCommittor, Splitting, SplittingMethod,
};
pub use structure::{detect_reset_structure, detect_reset_structure_with, ResetChannel, ResetStructure};
