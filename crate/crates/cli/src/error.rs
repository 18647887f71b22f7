use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] metaunravel::Error),
    #[error("cannot read config {path}: {source}")]
    ConfigRead { path: PathBuf, source: std::io::Error },
    #[error("cannot parse config {path}: {message}")]
    ConfigParse { path: PathBuf, message: String },
    #[error("invalid config: {0}")]
    Config(String),
    #[error("missing parameter '{0}'")]
    MissingParameter(&'static str),
    #[error("operation '{0}' is stochastic and needs a seed")]
    SeedRequired(&'static str),
    #[error("output directory {path} is not writable: {source}")]
    Output { path: PathBuf, source: std::io::Error },
}

/// Machine-readable error written to stderr.
#[derive(Serialize)]
pub struct ErrorReport {
    pub error: &'static str,
    pub message: String,
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        use metaunravel::Error as E;
        match self {
            CliError::Model(e) => match e {
                E::Kernel(_) => "numerical_error",
                E::DimensionMismatch { .. } => "dimension_mismatch",
                E::NotHermitian { .. } => "not_hermitian",
                E::InvalidInput(_) => "invalid_input",
                E::DegenerateSteadyState { .. } => "degenerate_steady_state",
                E::NoGap { .. } => "no_gap",
                E::NotResetProcess { .. } => "not_reset_process",
                E::ZeroJump { .. } => "zero_jump",
                E::AllRatesZero => "all_rates_zero",
                E::EmptyEnsemble => "empty_ensemble",
                E::GridMismatch => "grid_mismatch",
                E::ComplexSpectrum(_) => "complex_spectrum",
                E::InsufficientData { .. } => "insufficient_data",
                E::TooFewTransitions { .. } => "too_few_transitions",
                E::UnknownPreset(_) => "unknown_preset",
                E::MissingParam { .. } => "missing_param",
                E::BadResetIndex(_) => "bad_reset_index",
                E::Json(_) => "json_error",
                E::Csv(_) => "csv_error",
                E::Io(_) => "io_error",
            },
            CliError::ConfigRead { .. } | CliError::ConfigParse { .. } | CliError::Config(_) => "invalid_config",
            CliError::MissingParameter(_) => "missing_parameter",
            CliError::SeedRequired(_) => "seed_required",
            CliError::Output { .. } => "output_not_writable",
        }
    }

    pub fn report(&self) -> ErrorReport {
        ErrorReport { error: self.kind(), message: self.to_string() }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
