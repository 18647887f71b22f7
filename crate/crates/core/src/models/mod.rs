//! Preset models and the explicit three-state validation matrix.

mod appendix;
mod presets;

pub use appendix::{appendix_basis, appendix_liouvillian_3state, to_appendix_basis};
pub use presets::{
    build_preset, three_state_1j, three_state_2j, three_state_merged, three_state_physical, three_state_rotation,
    two_qubit_dfs, two_qubit_superposed, PresetName, PresetParams, DD, DU, UD, UU,
};
