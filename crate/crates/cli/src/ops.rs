//! One function per operation. Each writes its artifacts into the output
//! directory; CSV columns are listed in the README.

use metaunravel::metastat::{
    committor_mc, count_modes, invariant_measures, label_phases, transition_rates, CoreSetSpec, HistogramSpec,
};
use metaunravel::models::{build_preset, PresetName, PresetParams};
use metaunravel::qme::{evolve_qme, metastable_analysis, spectral_decompose};
use metaunravel::reset::{
    committor_reset, committor_single_reset, detect_reset_structure, elbow_analysis, geometric_grid,
    jumpless_trajectory, sample_semi_markov, splitting_by_quadrature, splitting_probabilities, write_jumpless_csv,
    JumplessTrajectory, ResetStructure, Splitting,
};
use metaunravel::unravel::{
    ensemble_average, output_grid, simulate_ensemble, simulate_trajectory, trajectory_rng, EffectiveGenerator,
};
use metaunravel::{Matrix, Model, Vector};
use serde::Serialize;

use crate::artifacts::OutputDir;
use crate::config::{CenterSpec, CoreConfig, ExperimentConfig, Operation, ResolvedModel, StateSpec};
use crate::error::{CliError, Result};

const DEFAULT_N_TRAJ: usize = 1000;
const DEFAULT_BINS: usize = 40;
const DEFAULT_RADIUS: f64 = 0.05;
const DEFAULT_PER_DECADE: usize = 8;
const QUADRATURE_CUTOFF: f64 = 1e12;

pub struct Context<'a> {
    pub cfg: &'a ExperimentConfig,
    pub model: &'a ResolvedModel,
    pub out: &'a mut OutputDir,
}

pub fn run(op: Operation, ctx: &mut Context<'_>) -> Result<()> {
    if op.is_stochastic() && ctx.cfg.seed.is_none() {
        return Err(CliError::SeedRequired(op.as_str()));
    }
    match op {
        Operation::Spectrum => spectrum(ctx),
        Operation::Evolve => evolve(ctx),
        Operation::Trajectory => trajectory(ctx),
        Operation::Ensemble => ensemble(ctx),
        Operation::Committor => committor(ctx),
        Operation::InvariantMeasure => invariant_measure(ctx),
        Operation::Splitting => splitting(ctx),
        Operation::Elbow => elbow(ctx),
        Operation::Scaling => scaling(ctx),
    }
}

#[derive(Clone, Copy)]
enum Panel {
    Trajectory,
    Arc,
    LogTau,
    Committor,
}

/// Figure backed by an artifact, decided by the preset: the
/// two-qubit model belongs to the two-gap figure when `Omega1 < Omega2`.
fn figure(preset: Option<&PresetParams>, panel: Panel) -> Option<&'static str> {
    let p = preset?;
    match (p.name, panel) {
        (PresetName::ThreeState1j, Panel::Trajectory) => Some("fig2b"),
        (PresetName::ThreeState1j, Panel::Arc) => Some("fig3b"),
        (PresetName::ThreeState1j, Panel::LogTau) => Some("fig3c"),
        (PresetName::ThreeState1j, Panel::Committor) => Some("fig3d"),
        (PresetName::ThreeState2j, Panel::Arc) => Some("fig4d"),
        (PresetName::ThreeState2j, Panel::LogTau) => Some("fig4e"),
        (PresetName::ThreeState2j, Panel::Committor) => Some("fig4f"),
        (PresetName::TwoQubitDfs, panel) => {
            let two_gap = matches!((p.get("omega1"), p.get("omega2")), (Ok(a), Ok(b)) if a < b);
            match (two_gap, panel) {
                (false, Panel::Arc) => Some("fig5d"),
                (false, Panel::LogTau) => Some("fig5e"),
                (true, Panel::Arc) => Some("fig6e"),
                (true, Panel::Committor) => Some("fig6f"),
                _ => None,
            }
        }
        _ => None,
    }
}

fn psi0(cfg: &ExperimentConfig, model: &Model) -> Result<Vector> {
    let psi = cfg.psi0.clone().unwrap_or(StateSpec::Basis(0)).to_vector(model.dim())?;
    if (psi.norm() - 1.0).abs() > 1e-10 {
        return Err(CliError::Config("psi0 must be normalised".into()));
    }
    Ok(psi)
}

fn time_grid(cfg: &ExperimentConfig) -> Result<(f64, f64)> {
    let t_final = cfg.positive(cfg.t_final, "t_final")?;
    let dt = match cfg.dt {
        Some(_) => cfg.positive(cfg.dt, "dt")?,
        None => t_final / 100.0,
    };
    Ok((t_final, dt))
}

fn density_header(d: usize) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    for i in 0..d {
        for j in 0..d {
            h.push(format!("re_{i}{j}"));
            h.push(format!("im_{i}{j}"));
        }
    }
    h
}

fn density_row(t: f64, rho: &Matrix) -> Vec<String> {
    let mut row = vec![t.to_string()];
    for z in rho.as_slice() {
        row.push(z.re.to_string());
        row.push(z.im.to_string());
    }
    row
}

#[derive(Serialize)]
struct EigenRow {
    index: usize,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct MetaSummary {
    m: usize,
    tau_s: f64,
    tau_f: f64,
    gap_ratio: f64,
}

#[derive(Serialize)]
struct SpectrumSummary {
    dim: usize,
    metastable: Option<MetaSummary>,
    metastable_error: Option<String>,
}

fn spectrum(ctx: &mut Context<'_>) -> Result<()> {
    let model = &ctx.model.model;
    let sp = spectral_decompose(model)?;
    let rows: Vec<EigenRow> =
        sp.values.iter().enumerate().map(|(index, z)| EigenRow { index, re: z.re, im: z.im }).collect();
    ctx.out.write_rows("spectrum.csv", None, &rows)?;
    let (metastable, metastable_error) = match metastable_analysis(model, &sp, None) {
        Ok(m) => (Some(MetaSummary { m: m.m, tau_s: m.tau_s, tau_f: m.tau_f, gap_ratio: m.gap_ratio }), None),
        Err(e) => (None, Some(e.to_string())),
    };
    ctx.out.write_json("spectrum.json", &SpectrumSummary { dim: model.dim(), metastable, metastable_error })
}

fn evolve(ctx: &mut Context<'_>) -> Result<()> {
    let model = &ctx.model.model;
    let (t_final, dt) = time_grid(ctx.cfg)?;
    let times = output_grid(t_final, dt);
    let rho0 = psi0(ctx.cfg, model)?.projector();
    let states = evolve_qme(model, &rho0, &times)?;
    ctx.out.write_with("evolve.csv", None, |buf| {
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(density_header(model.dim()))?;
        for (t, rho) in times.iter().zip(&states) {
            w.write_record(density_row(*t, rho))?;
        }
        w.flush()?;
        Ok(())
    })
}

/// Default cores for a reset process: each reset point is its own phase,
/// except for a single reset point, where the asymptote ball is the
/// second ("dark") phase.
fn build_cores(cfg: &ExperimentConfig, gen: &EffectiveGenerator, model: &Model) -> Result<Option<Vec<CoreSetSpec>>> {
    let rs = detect_reset_structure(model.jumps());
    if cfg.cores.is_empty() {
        let Ok(rs) = rs else { return Ok(None) };
        let radius = cfg.radius.unwrap_or(DEFAULT_RADIUS);
        if rs.reset_points.len() == 1 {
            let jt = jumpless_trajectory(gen, &rs, 0, None)?;
            return Ok(Some(vec![
                CoreSetSpec::reset(&rs, 0, "bright")?,
                CoreSetSpec::ball(jt.phi_a.clone(), radius, "dark")?,
            ]));
        }
        let names = phase_names(cfg, &rs)?;
        let cores = (0..rs.reset_points.len())
            .map(|j| CoreSetSpec::reset(&rs, j, names.0[names.1[j]].clone()))
            .collect::<metaunravel::Result<Vec<_>>>()?;
        return Ok(Some(cores));
    }
    let mut cores = Vec::with_capacity(cfg.cores.len());
    for c in &cfg.cores {
        cores.push(match c {
            CoreConfig::Reset { point, phase } => {
                let rs = rs.as_ref().map_err(|e| CliError::Config(format!("reset core on a non-reset model: {e}")))?;
                CoreSetSpec::reset(rs, *point, phase.clone())?
            }
            CoreConfig::Ball { center, radius, phase } => {
                let center = match center {
                    CenterSpec::Named(name) if name == "asymptote" => {
                        let rs = rs.as_ref().map_err(|e| CliError::Config(format!("no asymptote: {e}")))?;
                        jumpless_trajectory(gen, rs, 0, None)?.phi_a
                    }
                    CenterSpec::Named(name) => return Err(CliError::Config(format!("unknown ball centre '{name}'"))),
                    CenterSpec::State(s) => s.to_vector(model.dim())?,
                };
                CoreSetSpec::ball(center, *radius, phase.clone())?
            }
        });
    }
    Ok(Some(cores))
}

/// Distinct phase names and the phase index of every reset point.
fn phase_names(cfg: &ExperimentConfig, rs: &ResetStructure) -> Result<(Vec<String>, Vec<usize>)> {
    let n = rs.reset_points.len();
    let given: Vec<String> =
        if cfg.phases.is_empty() { (0..n).map(|j| format!("reset_{j}")).collect() } else { cfg.phases.clone() };
    if given.len() != n {
        return Err(CliError::Config(format!("{} phase names for {n} reset points", given.len())));
    }
    let mut names: Vec<String> = Vec::new();
    let mut of_point = Vec::with_capacity(n);
    for g in given {
        let idx = names.iter().position(|x| *x == g).unwrap_or_else(|| {
            names.push(g);
            names.len() - 1
        });
        of_point.push(idx);
    }
    Ok((names, of_point))
}

#[derive(Serialize)]
struct JumpRow {
    time: f64,
    channel: usize,
}

#[derive(Serialize)]
struct PhaseRow<'a> {
    t: f64,
    phase: &'a str,
}

fn trajectory(ctx: &mut Context<'_>) -> Result<()> {
    let model = &ctx.model.model;
    let (t_final, dt) = time_grid(ctx.cfg)?;
    let seed = ctx.cfg.seed.unwrap_or_default();
    let gen = EffectiveGenerator::new(model)?;
    let rec = simulate_trajectory(&gen, &psi0(ctx.cfg, model)?, t_final, dt, seed, 0)?;
    let fig = figure(ctx.model.preset.as_ref(), Panel::Trajectory);
    ctx.out.write_with("trajectory.csv", fig, |buf| rec.write_states_csv(buf))?;
    ctx.out.write_json("trajectory.json", &rec.sidecar())?;
    let jumps: Vec<JumpRow> =
        rec.jump_times.iter().zip(&rec.jump_indices).map(|(&time, &channel)| JumpRow { time, channel }).collect();
    ctx.out.write_with("jumps.csv", None, |buf| {
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(["time", "channel"])?;
        for j in &jumps {
            w.serialize(j)?;
        }
        w.flush()?;
        Ok(())
    })?;
    let Some(cores) = build_cores(ctx.cfg, &gen, model)? else { return Ok(()) };
    let labels = label_phases(&rec, &cores)?;
    let rows: Vec<PhaseRow> = labels
        .times
        .iter()
        .zip(&labels.labels)
        .map(|(&t, l)| PhaseRow { t, phase: l.map_or("", |x| labels.phases[x].as_str()) })
        .collect();
    ctx.out.write_rows("phases.csv", None, &rows)?;
    #[derive(Serialize)]
    struct RatesReport {
        rates: Option<metaunravel::metastat::TransitionRates>,
        error: Option<String>,
    }
    let report = match transition_rates(&[labels]) {
        Ok(r) => RatesReport { rates: Some(r), error: None },
        Err(e) => RatesReport { rates: None, error: Some(e.to_string()) },
    };
    ctx.out.write_json("rates.json", &report)
}

#[derive(Serialize)]
struct EnsembleRow {
    t: f64,
    row: usize,
    col: usize,
    mean_re: f64,
    mean_im: f64,
    stderr_re: f64,
    stderr_im: f64,
    qme_re: f64,
    qme_im: f64,
    within_3se: bool,
}

#[derive(Serialize)]
struct EnsembleSummary {
    n_traj: usize,
    seed: u64,
    entries: usize,
    within_3se: usize,
    max_abs_z: f64,
}

fn ensemble(ctx: &mut Context<'_>) -> Result<()> {
    let model = &ctx.model.model;
    let (t_final, dt) = time_grid(ctx.cfg)?;
    let seed = ctx.cfg.seed.unwrap_or_default();
    let n = ctx.cfg.n_traj.unwrap_or(DEFAULT_N_TRAJ);
    let gen = EffectiveGenerator::new(model)?;
    let psi = psi0(ctx.cfg, model)?;
    let records = simulate_ensemble(&gen, &psi, t_final, dt, n, seed)?;
    let avg = ensemble_average(&records)?;
    let exact = evolve_qme(model, &psi.projector(), &avg.times)?;
    let d = model.dim();
    let mut rows = Vec::with_capacity(avg.times.len() * d * d);
    let mut max_z = 0.0f64;
    for (k, &t) in avg.times.iter().enumerate() {
        for i in 0..d {
            for j in 0..d {
                let (m, s, q) = (avg.mean[k][(i, j)], avg.stderr[k][(i, j)], exact[k][(i, j)]);
                let z = |diff: f64, se: f64| if se > 0.0 { (diff / se).abs() } else if diff.abs() < 1e-12 { 0.0 } else { f64::INFINITY };
                let zmax = z(m.re - q.re, s.re).max(z(m.im - q.im, s.im));
                max_z = max_z.max(zmax);
                rows.push(EnsembleRow {
                    t,
                    row: i,
                    col: j,
                    mean_re: m.re,
                    mean_im: m.im,
                    stderr_re: s.re,
                    stderr_im: s.im,
                    qme_re: q.re,
                    qme_im: q.im,
                    within_3se: zmax <= 3.0,
                });
            }
        }
    }
    let within = rows.iter().filter(|r| r.within_3se).count();
    ctx.out.write_rows("ensemble.csv", None, &rows)?;
    let summary = EnsembleSummary { n_traj: n, seed, entries: rows.len(), within_3se: within, max_abs_z: max_z };
    ctx.out.write_json("ensemble.json", &summary)
}

#[derive(Serialize)]
struct CommittorCurveRow<'a> {
    reset_point: usize,
    tau: f64,
    ell: f64,
    phase: &'a str,
    committor: f64,
    method: &'static str,
}

fn reset_setup(model: &Model) -> Result<(EffectiveGenerator, ResetStructure, Vec<JumplessTrajectory>)> {
    let gen = EffectiveGenerator::new(model)?;
    let rs = detect_reset_structure(model.jumps())?;
    let jts = (0..rs.reset_points.len())
        .map(|j| jumpless_trajectory(&gen, &rs, j, None))
        .collect::<metaunravel::Result<Vec<_>>>()?;
    Ok((gen, rs, jts))
}

fn committor(ctx: &mut Context<'_>) -> Result<()> {
    let model = &ctx.model.model;
    let (gen, rs, jts) = reset_setup(model)?;
    let per_decade = ctx.cfg.per_decade.unwrap_or(DEFAULT_PER_DECADE).max(1);
    let radius = ctx.cfg.radius.unwrap_or(DEFAULT_RADIUS);
    let single = rs.reset_points.len() == 1;
    let (names, of_point) = if single {
        (vec!["bright".to_string(), "dark".to_string()], vec![0])
    } else {
        phase_names(ctx.cfg, &rs)?
    };
    let phase_of_channel = rs.phase_map(&of_point);
    let evaluate = |psi: &Vector, tau_max: f64| -> Result<(Vec<f64>, &'static str)> {
        if single {
            let c = committor_single_reset(&gen, &rs, psi, &jts[0].phi_a, radius, tau_max)?;
            Ok((vec![c.bright, c.dark], "single_reset"))
        } else {
            let s = splitting_probabilities(&gen, psi)?;
            Ok((committor_reset(&s, &phase_of_channel, names.len()), s.method.as_str()))
        }
    };
    let mut rows = Vec::new();
    for (j, jt) in jts.iter().enumerate() {
        let tau_max = *jt.taus.last().unwrap();
        for tau in geometric_grid(1e-2 * gen.fast_time(), tau_max, per_decade) {
            let (values, method) = evaluate(&jt.state_at(tau)?, tau_max)?;
            for (x, v) in values.into_iter().enumerate() {
                rows.push(CommittorCurveRow {
                    reset_point: j,
                    tau,
                    ell: jt.arc_at(tau),
                    phase: names[x].as_str(),
                    committor: v,
                    method,
                });
            }
        }
    }
    let fig = figure(ctx.model.preset.as_ref(), Panel::Committor);
    ctx.out.write_rows("committor.csv", fig, &rows)?;

    let Some(spec) = &ctx.cfg.psi0 else { return Ok(()) };
    let psi = spec.to_vector(model.dim())?;
    let tau_max = jts.iter().map(|jt| *jt.taus.last().unwrap()).fold(0.0, f64::max);
    let mut table = Vec::new();
    let mut push = |values: &[f64], method: &str| {
        for (x, v) in values.iter().enumerate() {
            table.push(metaunravel::reset::CommittorRow {
                psi_id: "psi0".into(),
                phase: names[x].clone(),
                value: *v,
                method: method.to_string(),
            });
        }
    };
    let (values, method) = evaluate(&psi, tau_max)?;
    push(&values, method);
    if !single {
        let q = splitting_by_quadrature(&gen, &psi, QUADRATURE_CUTOFF, &Default::default())?;
        push(&committor_reset(&q, &phase_of_channel, names.len()), q.method.as_str());
    }
    if let Some(seed) = ctx.cfg.seed {
        let cores: Vec<CoreSetSpec> = if single {
            vec![CoreSetSpec::reset(&rs, 0, "bright")?, CoreSetSpec::ball(jts[0].phi_a.clone(), radius, "dark")?]
        } else {
            (0..rs.reset_points.len())
                .map(|j| CoreSetSpec::reset(&rs, j, names[of_point[j]].clone()))
                .collect::<metaunravel::Result<Vec<_>>>()?
        };
        let n = ctx.cfg.n_traj.unwrap_or(DEFAULT_N_TRAJ);
        let est = committor_mc(&gen, &psi, &cores, n, seed, 1e3 * gen.slow_time().max(gen.fast_time()))?;
        let mut by_phase = vec![0.0; names.len()];
        for (core, p) in est.estimate.iter().enumerate() {
            let x = if single { core } else { of_point[core] };
            by_phase[x] += p;
        }
        push(&by_phase, "monte_carlo");
    }
    ctx.out.write_with("committor_state.csv", None, |buf| metaunravel::reset::write_committor_csv(&table, buf))
}

#[derive(Serialize)]
struct PartitionSummary {
    reset_index: usize,
    modes: usize,
}

#[derive(Serialize)]
struct HistogramSummary {
    events: usize,
    total_time: f64,
    excluded_time: f64,
    modes: usize,
    partitions: Vec<PartitionSummary>,
}

fn summarise(h: &metaunravel::metastat::Histogram) -> HistogramSummary {
    HistogramSummary {
        events: h.events,
        total_time: h.total_time,
        excluded_time: h.excluded_time,
        modes: count_modes(&h.combined_density()),
        partitions: h
            .partitions
            .iter()
            .map(|p| PartitionSummary { reset_index: p.reset_index, modes: count_modes(&p.density) })
            .collect(),
    }
}

fn invariant_measure(ctx: &mut Context<'_>) -> Result<()> {
    let model = &ctx.model.model;
    let t_final = ctx.cfg.positive(ctx.cfg.t_final, "t_final")?;
    let seed = ctx.cfg.seed.unwrap_or_default();
    let (gen, rs, jts) = reset_setup(model)?;
    let mut rng = trajectory_rng(seed, 0);
    let path = sample_semi_markov(&gen, &rs, &jts, ctx.cfg.reset_point.unwrap_or(0), t_final, &mut rng)?;
    let spec = HistogramSpec { bins: ctx.cfg.bins.unwrap_or(DEFAULT_BINS), burn_in: ctx.cfg.burn_in.unwrap_or(0.0) };
    let (log_tau, arc) = invariant_measures(&[path], &jts, &spec)?;
    let preset = ctx.model.preset.as_ref();
    ctx.out.write_with("invariant_ell.csv", figure(preset, Panel::Arc), |buf| arc.write_csv(buf))?;
    ctx.out.write_with("invariant_log_tau.csv", figure(preset, Panel::LogTau), |buf| log_tau.write_csv(buf))?;
    #[derive(Serialize)]
    struct Summary {
        seed: u64,
        t_final: f64,
        spec: HistogramSpec,
        ell: HistogramSummary,
        log10_tau: HistogramSummary,
    }
    ctx.out.write_json("invariant.json", &Summary { seed, t_final, spec, ell: summarise(&arc), log10_tau: summarise(&log_tau) })
}

#[derive(Serialize)]
struct SplittingRow {
    source: String,
    method: &'static str,
    channel: usize,
    destination: usize,
    probability: f64,
    never: f64,
}

fn splitting_rows(source: &str, s: &Splitting, rs: &ResetStructure, rows: &mut Vec<SplittingRow>) {
    for (k, p) in s.per_channel.iter().enumerate() {
        rows.push(SplittingRow {
            source: source.to_string(),
            method: s.method.as_str(),
            channel: k,
            destination: rs.channels[k].point,
            probability: *p,
            never: s.never,
        });
    }
}

fn splitting(ctx: &mut Context<'_>) -> Result<()> {
    let model = &ctx.model.model;
    let gen = EffectiveGenerator::new(model)?;
    let rs = detect_reset_structure(model.jumps())?;
    let mut sources: Vec<(String, Vector)> =
        rs.reset_points.iter().enumerate().map(|(j, p)| (format!("reset_{j}"), p.clone())).collect();
    if let Some(spec) = &ctx.cfg.psi0 {
        sources.push(("psi0".into(), spec.to_vector(model.dim())?));
    }
    let mut rows = Vec::new();
    for (name, psi) in &sources {
        splitting_rows(name, &splitting_probabilities(&gen, psi)?, &rs, &mut rows);
        splitting_rows(name, &splitting_by_quadrature(&gen, psi, QUADRATURE_CUTOFF, &Default::default())?, &rs, &mut rows);
    }
    ctx.out.write_rows("splitting.csv", None, &rows)
}

fn elbow(ctx: &mut Context<'_>) -> Result<()> {
    let model = &ctx.model.model;
    let (gen, rs, jts) = reset_setup(model)?;
    let report = elbow_analysis(&gen, &rs, ctx.cfg.elbow_threshold.unwrap_or(1.0))?;
    ctx.out.write_json("elbow.json", &report)?;
    for (j, jt) in jts.iter().enumerate() {
        ctx.out.write_with(&format!("jumpless_{j}.csv"), None, |buf| write_jumpless_csv(jt, buf))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ScalingRow {
    eps: f64,
    omega1: f64,
    omega2: f64,
    lambda2_re: f64,
    lambda2_im: f64,
    survival_at_elbow: Option<f64>,
    cross_jump_probability: Option<f64>,
}

/// Largest probability, over reset points, that the first jump lands on a
/// different reset point.
fn cross_jump_probability(gen: &EffectiveGenerator, rs: &ResetStructure) -> Result<Option<f64>> {
    if rs.reset_points.len() < 2 {
        return Ok(None);
    }
    let mut worst = 0.0f64;
    for (j, p) in rs.reset_points.iter().enumerate() {
        let s = splitting_probabilities(gen, p)?;
        let leak: f64 = rs.channels.iter().zip(&s.per_channel).filter(|(c, _)| c.point != j).map(|(_, p)| p).sum();
        worst = worst.max(leak);
    }
    Ok(Some(worst))
}

fn scaling(ctx: &mut Context<'_>) -> Result<()> {
    let preset = ctx
        .model
        .preset
        .clone()
        .ok_or_else(|| CliError::Config("scaling needs a preset model".into()))?;
    if ctx.cfg.eps.is_empty() {
        return Err(CliError::MissingParameter("eps"));
    }
    let unit2 = ctx.cfg.omega2_unit.unwrap_or(1.0);
    let mut rows = Vec::with_capacity(ctx.cfg.eps.len());
    for &eps in &ctx.cfg.eps {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(CliError::Config("eps values must be positive".into()));
        }
        let mut p = preset.clone().with("omega2", eps * unit2);
        if let Some(u1) = ctx.cfg.omega1_unit {
            p = p.with("omega1", eps * eps * u1);
        }
        let model: Model = build_preset(&p)?;
        let lambda2 = spectral_decompose(&model)?.values[1];
        let gen = EffectiveGenerator::new(&model)?;
        let rs = detect_reset_structure(model.jumps()).ok();
        let survival_at_elbow = rs
            .as_ref()
            .filter(|rs| rs.reset_points.len() == 1)
            .and_then(|rs| elbow_analysis(&gen, rs, ctx.cfg.elbow_threshold.unwrap_or(1.0)).ok())
            .map(|e| e.survival_at_tau_e);
        let cross = match &rs {
            Some(rs) => cross_jump_probability(&gen, rs)?,
            None => None,
        };
        rows.push(ScalingRow {
            eps,
            omega1: p.get("omega1")?,
            omega2: p.get("omega2")?,
            lambda2_re: lambda2.re,
            lambda2_im: lambda2.im,
            survival_at_elbow,
            cross_jump_probability: cross,
        });
    }
    ctx.out.write_rows("scaling.csv", None, &rows)
}
