use serde::{Deserialize, Serialize};

/// Every numerical threshold used across the crate, in one place.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// `|<left_i, right_j> - delta_ij|` allowed after biorthonormalisation.
    pub biorthonormality: f64,
    /// Relative residual `||A r - lambda r|| / ||A||` accepted for eigenpairs.
    pub eigen_residual: f64,
    /// Largest eigenvalue condition number `||left_i|| ||right_i||` before a
    /// matrix is reported as defective.
    pub defective_condition: f64,
    /// Minimum `|a_i + b_j|` for a Sylvester pencil to count as regular.
    pub sylvester_separation: f64,
    /// Relative residual required of a Sylvester solution.
    pub sylvester_residual: f64,
    pub hermitian: f64,
    /// `|lambda|` below which a Liouvillian eigenvalue counts as zero.
    pub zero_eigenvalue: f64,
    /// Minimum `Re(lambda_{m+1}) / Re(lambda_m)` for a spectral gap.
    pub gap_ratio: f64,
    /// Relative size of the second singular value tolerated in a rank-1 jump.
    pub rank_one: f64,
    /// Trace distance below which two reset states are the same point.
    pub reset_dedup: f64,
    /// Relative time tolerance of the jump-time root finder.
    pub root_time: f64,
    /// Relative change in arc length that stops grid refinement.
    pub arc_length: f64,
    /// Default trace-distance radius of a dark core ball.
    pub dark_ball_radius: f64,
    /// Default elbow threshold `d`.
    pub elbow_threshold: f64,
    /// Absolute tolerance for adaptive quadrature.
    pub quadrature: f64,
    /// Normalisation tolerance for pure states.
    pub state_norm: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            biorthonormality: 1e-8,
            eigen_residual: 1e-8,
            defective_condition: 1e6,
            sylvester_separation: 1e-10,
            sylvester_residual: 1e-9,
            hermitian: 1e-10,
            zero_eigenvalue: 1e-10,
            gap_ratio: 10.0,
            rank_one: 1e-10,
            reset_dedup: 1e-9,
            root_time: 1e-10,
            arc_length: 1e-4,
            dark_ball_radius: 0.05,
            elbow_threshold: 1.0,
            quadrature: 1e-11,
            state_norm: 1e-10,
        }
    }
}
