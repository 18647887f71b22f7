//! Experiment configuration: a JSON or TOML document plus flag overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use metaunravel::models::{build_preset, PresetName, PresetParams};
use metaunravel::qme::ModelDocument;
use metaunravel::{Model, Vector, C64};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Environment variable naming the default output directory.
pub const OUTPUT_ENV: &str = "METAUNRAVEL_OUT";
const DEFAULT_OUTPUT: &str = "out";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Operation {
    Spectrum,
    Evolve,
    Trajectory,
    Ensemble,
    Committor,
    InvariantMeasure,
    Splitting,
    Elbow,
    Scaling,
}

impl Operation {
    pub fn as_str(self) -> &'static str {
        match self {
            Operation::Spectrum => "spectrum",
            Operation::Evolve => "evolve",
            Operation::Trajectory => "trajectory",
            Operation::Ensemble => "ensemble",
            Operation::Committor => "committor",
            Operation::InvariantMeasure => "invariant-measure",
            Operation::Splitting => "splitting",
            Operation::Elbow => "elbow",
            Operation::Scaling => "scaling",
        }
    }

    pub fn is_stochastic(self) -> bool {
        matches!(self, Operation::Trajectory | Operation::Ensemble | Operation::InvariantMeasure)
    }
}

/// A preset with its rates, a model document inline, or a path to one.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelSpec {
    File { file: PathBuf },
    Preset(PresetParams),
    Document(ModelDocument),
}

/// Initial state: a basis index or a list of `[re, im]` amplitudes.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateSpec {
    Basis(usize),
    Amplitudes(Vec<[f64; 2]>),
}

impl StateSpec {
    pub fn to_vector(&self, dim: usize) -> Result<Vector> {
        match self {
            StateSpec::Basis(k) if *k < dim => Ok(Vector::basis(dim, *k)),
            StateSpec::Basis(k) => Err(CliError::Config(format!("basis index {k} out of range for dimension {dim}"))),
            StateSpec::Amplitudes(a) if a.len() == dim => {
                Ok(Vector::from_vec(a.iter().map(|[re, im]| C64::new(*re, *im)).collect()))
            }
            StateSpec::Amplitudes(a) => {
                Err(CliError::Config(format!("state has {} amplitudes, model dimension is {dim}", a.len())))
            }
        }
    }
}

/// Centre of a ball core: the asymptote of the jumpless trajectories or an
/// explicit state.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CenterSpec {
    Named(String),
    State(StateSpec),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CoreConfig {
    Reset { point: usize, phase: String },
    Ball { center: CenterSpec, radius: f64, phase: String },
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: Option<ModelSpec>,
    pub operation: Option<Operation>,
    /// Total simulated or evolved time.
    pub t_final: Option<f64>,
    /// Output grid spacing.
    pub dt: Option<f64>,
    pub n_traj: Option<usize>,
    pub seed: Option<u64>,
    /// Scaling parameters: `Omega2 = eps * omega2_unit`.
    #[serde(default)]
    pub eps: Vec<f64>,
    pub omega2_unit: Option<f64>,
    /// When set, `Omega1 = eps^2 * omega1_unit` in scaling runs.
    pub omega1_unit: Option<f64>,
    /// Core sets for phase labelling of trajectories.
    #[serde(default)]
    pub cores: Vec<CoreConfig>,
    /// Phase name per reset point for reset committors.
    #[serde(default)]
    pub phases: Vec<String>,
    pub psi0: Option<StateSpec>,
    pub reset_point: Option<usize>,
    pub bins: Option<usize>,
    pub burn_in: Option<f64>,
    /// Radius of the dark ball around the asymptote (single reset point).
    pub radius: Option<f64>,
    pub elbow_threshold: Option<f64>,
    /// Points per decade of the committor `tau` grid.
    pub per_decade: Option<usize>,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|source| CliError::ConfigRead { path: path.to_path_buf(), source })?;
        let parse_err = |message: String| CliError::ConfigParse { path: path.to_path_buf(), message };
        match path.extension().and_then(|e| e.to_str()) {
            Some("toml") => toml::from_str(&text).map_err(|e| parse_err(e.to_string())),
            _ => serde_json::from_str(&text).map_err(|e| parse_err(e.to_string())),
        }
    }

    /// Output directory: explicit setting, else the environment variable,
    /// else `./out`.
    pub fn output_dir(&self) -> PathBuf {
        self.output
            .clone()
            .or_else(|| std::env::var_os(OUTPUT_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT))
    }

    pub fn positive(&self, value: Option<f64>, name: &'static str) -> Result<f64> {
        let v = value.ok_or(CliError::MissingParameter(name))?;
        if !(v.is_finite() && v > 0.0) {
            return Err(CliError::Config(format!("{name} must be positive and finite")));
        }
        Ok(v)
    }
}

/// Reference rates used when a preset is named without parameters.
pub fn reference_params(name: PresetName) -> PresetParams {
    let base = match name {
        PresetName::ThreeState1j => PresetParams::three_state_reference(),
        PresetName::ThreeState2j | PresetName::ThreeStateMerged => PresetParams::three_state_two_jump_reference(),
        PresetName::TwoQubitDfs | PresetName::TwoQubitSuperposed => PresetParams::two_qubit_reference(),
    };
    PresetParams { name, params: base.params }
}

/// The model to run, with its preset (if any) kept for figure tagging and
/// scaling runs.
pub struct ResolvedModel {
    pub model: Model,
    pub preset: Option<PresetParams>,
    pub description: String,
}

pub fn resolve_model(spec: &ModelSpec) -> Result<ResolvedModel> {
    match spec {
        ModelSpec::Preset(p) => {
            let (required, optional) = p.name.parameters();
            if let Some(k) = p.params.keys().find(|k| !required.contains(&k.as_str()) && !optional.iter().any(|(o, _)| o == k)) {
                return Err(CliError::Config(format!("preset {} has no parameter '{k}'", p.name)));
            }
            let model = build_preset(p)?;
            let params: Vec<String> = p.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            Ok(ResolvedModel { model, preset: Some(p.clone()), description: format!("{}({})", p.name, params.join(", ")) })
        }
        ModelSpec::Document(doc) => {
            let model = Model::from_document(doc)?;
            Ok(ResolvedModel { description: format!("document '{}'", doc.label), model, preset: None })
        }
        ModelSpec::File { file } => {
            let text = std::fs::read_to_string(file)
                .map_err(|source| CliError::ConfigRead { path: file.clone(), source })?;
            let model = Model::from_json(&text)?;
            Ok(ResolvedModel { description: format!("file {}", file.display()), model, preset: None })
        }
    }
}

/// Applies `key=value` overrides to a preset.
pub fn apply_params(mut preset: PresetParams, overrides: &[(String, f64)]) -> PresetParams {
    let mut params: BTreeMap<String, f64> = preset.params;
    for (k, v) in overrides {
        params.insert(k.clone(), *v);
    }
    preset.params = params;
    preset
}

pub fn parse_key_value(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected KEY=VALUE, found '{s}'"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("bad value for {k}: {e}"))?;
    Ok((k.trim().to_string(), v))
}
