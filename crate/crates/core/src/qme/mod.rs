//! Master-equation picture: Liouvillian, spectrum, metastable manifold,
//! committor operators.

mod dfs;
mod liouvillian;
mod meta;
mod model;
mod spectral;

pub use dfs::{dfs_coordinates, DfsCoordinates};
pub use liouvillian::{apply_lindblad, build_liouvillian};
pub use meta::{
    choose_slow_modes, committor_qme, metastable_analysis, metastable_analysis_with, MetaDecomposition, PhaseStructure,
    Timescales, TwoPhase,
};
pub use model::{LindbladModel, ModelDocument};
pub use spectral::{check_density_matrix, evolve_qme, spectral_decompose, spectral_decompose_with, SpectralData};
