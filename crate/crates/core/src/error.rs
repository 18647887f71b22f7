use num_complex::Complex;
use thiserror::Error;

use crate::numkernel::KernelError;

/// Errors raised by the physics and statistics layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("Hamiltonian is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("steady state is not unique: {} eigenvalues vanish", candidates.len())]
    DegenerateSteadyState { candidates: Vec<Complex<f64>> },
    #[error("no spectral gap after mode {m}: ratio {ratio:.3} below threshold")]
    NoGap { m: usize, ratio: f64 },
    #[error("jump operator {index} is not rank one (relative residual {residual:e})")]
    NotResetProcess { index: usize, residual: f64 },
    #[error("jump operator {index} vanishes")]
    ZeroJump { index: usize },
    #[error("all jump rates vanish for this state")]
    AllRatesZero,
    #[error("ensemble is empty")]
    EmptyEnsemble,
    #[error("trajectory records do not share an output grid")]
    GridMismatch,
    #[error("effective generator has a complex spectrum: {0:?}")]
    ComplexSpectrum(Vec<Complex<f64>>),
    #[error("insufficient data: {found} events, need {needed}")]
    InsufficientData { found: usize, needed: usize },
    #[error("too few transitions: {found}, need {needed}")]
    TooFewTransitions { found: usize, needed: usize },
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
    #[error("preset '{preset}' requires parameter '{param}'")]
    MissingParam { preset: String, param: String },
    #[error("reset index {0} out of range")]
    BadResetIndex(usize),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
