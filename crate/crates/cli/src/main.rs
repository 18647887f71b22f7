//! `metaunravel`: batch driver for spectra, trajectories and reset-process
//! analyses. Prints a JSON manifest of the written files on stdout; on
//! failure prints a JSON error on stderr and exits nonzero.

mod artifacts;
mod config;
mod error;
mod ops;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use metaunravel::models::PresetName;

use crate::artifacts::{Manifest, OutputDir};
use crate::config::{
    apply_params, parse_key_value, reference_params, resolve_model, ExperimentConfig, ModelSpec, Operation, StateSpec,
};
use crate::error::{CliError, Result};

#[derive(Parser, Debug)]
#[command(version, about = "Metastability analysis of quantum jump trajectories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Liouvillian eigenvalues and metastable timescales.
    Spectrum(Overrides),
    /// Density matrix on a time grid.
    Evolve(Overrides),
    /// One unravelled trajectory with its jump record and phase labels.
    Trajectory(Overrides),
    /// Trajectory ensemble mean compared with the master equation.
    Ensemble(Overrides),
    /// Committors along the jumpless trajectories.
    Committor(Overrides),
    /// Invariant measures of the semi-Markov jump process.
    InvariantMeasure(Overrides),
    /// Splitting probabilities of the first jump.
    Splitting(Overrides),
    /// Elbow analysis and jumpless trajectory tables.
    Elbow(Overrides),
    /// Spectral gap, elbow survival and cross-jump probability against eps.
    Scaling(Overrides),
    /// Runs the operation named in the config file.
    Run(Overrides),
}

/// Flags override the corresponding config entries.
#[derive(Args, Debug, Default)]
struct Overrides {
    /// JSON or TOML experiment config (by extension; JSON otherwise).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Preset model name; its reference rates are used unless overridden.
    #[arg(long)]
    preset: Option<PresetName>,
    /// Preset rate override, e.g. `--param omega2=1e-3` (repeatable).
    #[arg(long = "param", value_parser = parse_key_value)]
    params: Vec<(String, f64)>,
    /// Model document (JSON) instead of a preset.
    #[arg(long, conflicts_with = "preset")]
    model_file: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    t_final: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    n_traj: Option<usize>,
    /// Comma-separated scaling parameters.
    #[arg(long, value_delimiter = ',')]
    eps: Vec<f64>,
    /// Initial state as a basis index.
    #[arg(long)]
    psi0: Option<usize>,
    #[arg(long)]
    reset_point: Option<usize>,
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long)]
    burn_in: Option<f64>,
    #[arg(long)]
    radius: Option<f64>,
    /// Comma-separated phase name per reset point.
    #[arg(long, value_delimiter = ',')]
    phases: Vec<String>,
    /// Output directory (default: $METAUNRAVEL_OUT, then ./out).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for ensemble operations (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
}

impl Overrides {
    fn apply(&self, cfg: &mut ExperimentConfig) -> Result<()> {
        if let Some(name) = self.preset {
            cfg.model = Some(ModelSpec::Preset(reference_params(name)));
        }
        if let Some(file) = &self.model_file {
            cfg.model = Some(ModelSpec::File { file: file.clone() });
        }
        if !self.params.is_empty() {
            match cfg.model.take() {
                Some(ModelSpec::Preset(p)) => cfg.model = Some(ModelSpec::Preset(apply_params(p, &self.params))),
                _ => return Err(CliError::Config("--param needs a preset model".into())),
            }
        }
        macro_rules! set {
            ($($field:ident),*) => { $( if self.$field.is_some() { cfg.$field = self.$field.clone(); } )* };
        }
        set!(seed, t_final, dt, n_traj, reset_point, bins, burn_in, radius);
        if let Some(k) = self.psi0 {
            cfg.psi0 = Some(StateSpec::Basis(k));
        }
        if !self.eps.is_empty() {
            cfg.eps = self.eps.clone();
        }
        if !self.phases.is_empty() {
            cfg.phases = self.phases.clone();
        }
        if self.out.is_some() {
            cfg.output = self.out.clone();
        }
        Ok(())
    }
}

fn execute(cli: Cli) -> Result<Manifest> {
    let (sub, overrides) = match cli.command {
        Command::Spectrum(o) => (Some(Operation::Spectrum), o),
        Command::Evolve(o) => (Some(Operation::Evolve), o),
        Command::Trajectory(o) => (Some(Operation::Trajectory), o),
        Command::Ensemble(o) => (Some(Operation::Ensemble), o),
        Command::Committor(o) => (Some(Operation::Committor), o),
        Command::InvariantMeasure(o) => (Some(Operation::InvariantMeasure), o),
        Command::Splitting(o) => (Some(Operation::Splitting), o),
        Command::Elbow(o) => (Some(Operation::Elbow), o),
        Command::Scaling(o) => (Some(Operation::Scaling), o),
        Command::Run(o) => (None, o),
    };
    let mut cfg = match &overrides.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    overrides.apply(&mut cfg)?;
    let op = match (sub, cfg.operation) {
        (Some(a), Some(b)) if a != b => {
            return Err(CliError::Config(format!("config operation '{}' conflicts with '{}'", b.as_str(), a.as_str())))
        }
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => return Err(CliError::MissingParameter("operation")),
    };
    let spec = cfg.model.clone().ok_or(CliError::MissingParameter("model"))?;
    let model = resolve_model(&spec)?;
    let mut out = OutputDir::create(&cfg.output_dir())?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = overrides.workers {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::Config(format!("cannot start workers: {e}")))?;
    pool.install(|| ops::run(op, &mut ops::Context { cfg: &cfg, model: &model, out: &mut out }))?;
    Ok(Manifest {
        tool: env!("CARGO_BIN_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        operation: op.as_str(),
        model: model.description,
        seed: cfg.seed,
        output_dir: out.path().to_path_buf(),
        artifacts: out.into_artifacts(),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(manifest) => {
            println!("{}", serde_json::to_string_pretty(&manifest).expect("manifest serialises"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", serde_json::to_string(&e.report()).expect("error serialises"));
            ExitCode::from(1)
        }
    }
}
