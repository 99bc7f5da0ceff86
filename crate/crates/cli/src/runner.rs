//! Executes configured runs and sweeps.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use qsense_core::bayes::{EstimateReport, LikelihoodModel};
use qsense_core::models::{
    estimate_batch, nsr, rate_closed_form, rate_pipeline, simulate_shots, CaseSetup, CoherenceCase, CoherenceModel,
    ExponentialRateModel, Framework, LifetimeCase, LifetimeModel, ShotBatch,
};
use qsense_core::numerics::RandomStream;
use qsense_core::strategy::StrategyReport;

use crate::config::{Case, ConfigError, ExperimentConfig, SweepAxis};

/// Relative tolerance for the rate pipeline against the closed form.
pub const RATE_AGREEMENT: f64 = 1e-3;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numerical(#[from] qsense_core::Error),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv failure: {0}")]
    Csv(#[from] csv::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Numerical(_) => 3,
            RunError::Io(_) | RunError::Csv(_) => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub repetition: usize,
    pub framework: &'static str,
    pub shot: usize,
    pub outcome: f64,
    pub control: f64,
    pub estimate: f64,
    pub error: f64,
    pub empirical_loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateRow {
    pub repetition: usize,
    pub framework: &'static str,
    pub estimate: f64,
    pub error: f64,
    pub empirical_loss: f64,
    pub out_of_range: bool,
    pub zeta: Option<f64>,
    pub dzeta: Option<f64>,
    pub closed_form_estimate: Option<f64>,
    pub closed_form_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameworkSummary {
    pub framework: &'static str,
    /// Noise-to-signal ratio of `nsr_quantity` across repetitions.
    pub nsr: f64,
    pub nsr_quantity: &'static str,
    pub mean: f64,
    pub gain: Option<f64>,
    pub min_loss: Option<f64>,
    pub intrinsic_gain: Option<f64>,
    pub out_of_range: usize,
    pub singular: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateCheck {
    pub max_relative_estimate_difference: f64,
    pub max_relative_error_difference: f64,
    pub tolerance: f64,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub framework: &'static str,
    pub gain: Option<f64>,
    pub min_loss: Option<f64>,
    pub intrinsic_gain: Option<f64>,
    pub nsr: Option<f64>,
    pub mean: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepDiagnostics {
    /// Intrinsic gain strictly increasing along the axis, per framework.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub strictly_increasing: BTreeMap<&'static str, bool>,
    /// Transformation gain at least the geometric one at every point.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transformation_ge_geometry: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta_star: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub axis: SweepAxis,
    pub rows: Vec<SweepRow>,
    pub diagnostics: SweepDiagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub case: Case,
    pub shots: usize,
    pub repetitions: usize,
    pub seed: u64,
    pub true_parameter: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prior_width: Option<f64>,
    pub grid_nodes: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub frameworks: Vec<FrameworkSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate_check: Option<RateCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSummary>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunArtifacts {
    pub config: ExperimentConfig,
    pub trajectory: Vec<TrajectoryRow>,
    pub estimates: Vec<EstimateRow>,
    pub summary: Summary,
}

/// Everything one repetition produced, for every framework.
struct Repetition {
    estimates: Vec<EstimateRow>,
    trajectory: Vec<TrajectoryRow>,
}

fn trajectory_rows(rep: usize, framework: Framework, batch: &ShotBatch, path: &[EstimateReport]) -> Vec<TrajectoryRow> {
    path.iter()
        .enumerate()
        .map(|(k, r)| TrajectoryRow {
            repetition: rep,
            framework: framework.name(),
            shot: k + 1,
            outcome: batch.outcomes[k],
            control: batch.controls[k],
            estimate: r.estimate,
            error: r.error,
            empirical_loss: r.empirical_loss,
        })
        .collect()
}

fn estimate_row(rep: usize, framework: Framework, r: &EstimateReport) -> EstimateRow {
    EstimateRow {
        repetition: rep,
        framework: framework.name(),
        estimate: r.estimate,
        error: r.error,
        empirical_loss: r.empirical_loss,
        out_of_range: r.out_of_range,
        zeta: None,
        dzeta: None,
        closed_form_estimate: None,
        closed_form_error: None,
    }
}

/// Simulates and estimates the quantum case studies for one repetition.
fn quantum_repetition(
    rep: usize,
    config: &ExperimentConfig,
    setups: &[CaseSetup],
    likelihood: &dyn LikelihoodModel,
    theta: f64,
    control: f64,
    coherence: Option<&CoherenceModel>,
) -> qsense_core::Result<Repetition> {
    let mut rng = RandomStream::new(config.seed, rep as u64);
    let batch = simulate_shots(likelihood, theta, config.shots, &[control], &mut rng)?;
    let mut out = Repetition { estimates: Vec::new(), trajectory: Vec::new() };
    for setup in setups {
        let run = estimate_batch(setup, likelihood, &batch, config.trajectory)?;
        let mut row = estimate_row(rep, setup.framework, &run.report);
        if let Some(m) = coherence {
            let q = m.quantifier(run.report.estimate, run.report.error)?;
            row.zeta = Some(q.zeta);
            row.dzeta = Some(if q.singular { f64::INFINITY } else { q.dzeta });
        }
        out.estimates.push(row);
        out.trajectory.extend(trajectory_rows(rep, setup.framework, &batch, &run.trajectory));
    }
    Ok(out)
}

fn rate_repetition(rep: usize, config: &ExperimentConfig) -> qsense_core::Result<Repetition> {
    let mut rng = RandomStream::new(config.seed, rep as u64);
    let batch = simulate_shots(&ExponentialRateModel, config.true_parameter, config.shots, &[0.0], &mut rng)?;
    let t_bar = batch.mean()?;
    let grid = rate_pipeline(&batch.outcomes, 1.0, config.nodes())?;
    let exact = rate_closed_form(t_bar, config.shots, 1.0)?;
    let mut out = Repetition { estimates: Vec::new(), trajectory: Vec::new() };
    for framework in config.framework.frameworks() {
        let mut row = estimate_row(rep, framework, &grid);
        row.closed_form_estimate = Some(exact.estimate);
        row.closed_form_error = Some(exact.error);
        out.estimates.push(row);
        if config.trajectory {
            let mut sum = 0.0;
            let path = batch
                .outcomes
                .iter()
                .enumerate()
                .map(|(k, t)| {
                    sum += t;
                    rate_closed_form(sum / (k + 1) as f64, k + 1, 1.0)
                })
                .collect::<qsense_core::Result<Vec<_>>>()?;
            out.trajectory.extend(trajectory_rows(rep, framework, &batch, &path));
        }
    }
    Ok(out)
}

fn summarize(
    config: &ExperimentConfig,
    estimates: &[EstimateRow],
    strategies: &[(Framework, Option<StrategyReport>)],
) -> qsense_core::Result<Vec<FrameworkSummary>> {
    strategies
        .iter()
        .map(|(framework, strategy)| {
            let rows: Vec<&EstimateRow> = estimates.iter().filter(|r| r.framework == framework.name()).collect();
            let (values, quantity): (Vec<f64>, _) = match config.case {
                Case::Coherence => (rows.iter().map(|r| r.zeta.unwrap_or(0.0)).collect(), "zeta"),
                _ => (rows.iter().map(|r| r.estimate).collect(), "estimate"),
            };
            Ok(FrameworkSummary {
                framework: framework.name(),
                nsr: nsr(&values)?,
                nsr_quantity: quantity,
                mean: values.iter().sum::<f64>() / values.len() as f64,
                gain: strategy.as_ref().map(|s| s.gain),
                min_loss: strategy.as_ref().map(|s| s.min_loss),
                intrinsic_gain: strategy.as_ref().map(|s| s.intrinsic_gain),
                out_of_range: rows.iter().filter(|r| r.out_of_range).count(),
                singular: rows.iter().filter(|r| r.dzeta == Some(f64::INFINITY)).count(),
            })
        })
        .collect()
}

fn rate_check(estimates: &[EstimateRow]) -> RateCheck {
    let rel = |a: f64, b: Option<f64>| b.map_or(0.0, |b| (a / b - 1.0).abs());
    let est = estimates.iter().map(|r| rel(r.estimate, r.closed_form_estimate)).fold(0.0, f64::max);
    let err = estimates.iter().map(|r| rel(r.error, r.closed_form_error)).fold(0.0, f64::max);
    RateCheck {
        max_relative_estimate_difference: est,
        max_relative_error_difference: err,
        tolerance: RATE_AGREEMENT,
        agree: est < RATE_AGREEMENT && err < RATE_AGREEMENT,
    }
}

fn collect(reps: Vec<Repetition>) -> (Vec<EstimateRow>, Vec<TrajectoryRow>) {
    let mut estimates = Vec::new();
    let mut trajectory = Vec::new();
    for r in reps {
        estimates.extend(r.estimates);
        trajectory.extend(r.trajectory);
    }
    (estimates, trajectory)
}

fn base_summary(config: &ExperimentConfig) -> Summary {
    Summary {
        case: config.case,
        shots: config.shots,
        repetitions: config.repetitions,
        seed: config.seed,
        true_parameter: config.true_parameter,
        prior_width: (config.case != Case::Rate).then(|| config.width()),
        grid_nodes: config.nodes(),
        frameworks: Vec::new(),
        rate_check: None,
        sweep: None,
    }
}

/// One experiment without a sweep axis.
pub fn run_single(config: &ExperimentConfig) -> Result<RunArtifacts, RunError> {
    config.validate()?;
    let frameworks = config.framework.frameworks();
    let reps = 0..config.repetitions;
    let mut summary = base_summary(config);
    let (estimates, trajectory) = match config.case {
        Case::Rate => {
            let out = reps.into_par_iter().map(|r| rate_repetition(r, config)).collect::<Result<Vec<_>, _>>()?;
            let (estimates, trajectory) = collect(out);
            let strategies: Vec<_> = frameworks.iter().map(|&f| (f, None)).collect();
            summary.frameworks = summarize(config, &estimates, &strategies)?;
            summary.rate_check = Some(rate_check(&estimates));
            (estimates, trajectory)
        }
        Case::Coherence => {
            let model = CoherenceModel::new(config.lambda)?;
            let case = CoherenceCase::new(model, config.width(), config.nodes())?;
            let setups = frameworks.iter().map(|&f| case.setup(f)).collect::<Result<Vec<_>, _>>()?;
            let out = reps
                .into_par_iter()
                .map(|r| quantum_repetition(r, config, &setups, &model, config.true_parameter, 0.0, Some(&model)))
                .collect::<Result<Vec<_>, _>>()?;
            let (estimates, trajectory) = collect(out);
            let strategies =
                frameworks.iter().map(|&f| Ok((f, Some(case.strategy(f)?)))).collect::<Result<Vec<_>, RunError>>()?;
            summary.frameworks = summarize(config, &estimates, &strategies)?;
            (estimates, trajectory)
        }
        Case::Lifetime => {
            let t = config.probe_time;
            let case = LifetimeCase::new(config.width(), t, config.nodes())?;
            let likelihood = LifetimeModel::new(1.0, t)?.energy_likelihood()?;
            let setups = frameworks.iter().map(|&f| case.setup(f)).collect::<Result<Vec<_>, _>>()?;
            let theta = config.true_parameter * t;
            let out = reps
                .into_par_iter()
                .map(|r| quantum_repetition(r, config, &setups, &likelihood, theta, t, None))
                .collect::<Result<Vec<_>, _>>()?;
            let (estimates, trajectory) = collect(out);
            let strategies = frameworks
                .iter()
                .map(|&f| Ok((f, Some(case.strategy(f, 1.0)?))))
                .collect::<Result<Vec<_>, RunError>>()?;
            summary.frameworks = summarize(config, &estimates, &strategies)?;
            (estimates, trajectory)
        }
    };
    Ok(RunArtifacts { config: config.clone(), trajectory, estimates, summary })
}

fn strategy_row(value: f64, framework: Framework, s: &StrategyReport) -> SweepRow {
    SweepRow {
        value,
        framework: framework.name(),
        gain: Some(s.gain),
        min_loss: Some(s.min_loss),
        intrinsic_gain: Some(s.intrinsic_gain),
        nsr: None,
        mean: None,
    }
}

fn width_rows(config: &ExperimentConfig, values: &[f64]) -> qsense_core::Result<Vec<SweepRow>> {
    let frameworks = config.framework.frameworks();
    let rows = values
        .par_iter()
        .map(|&w| {
            frameworks
                .iter()
                .map(|&f| {
                    let s = match config.case {
                        Case::Coherence => {
                            CoherenceCase::new(CoherenceModel::new(config.lambda)?, w, config.nodes())?.strategy(f)?
                        }
                        _ => LifetimeCase::new(w, config.probe_time, config.nodes())?.strategy(f, 1.0)?,
                    };
                    Ok(strategy_row(w, f, &s))
                })
                .collect::<qsense_core::Result<Vec<_>>>()
        })
        .collect::<qsense_core::Result<Vec<_>>>()?;
    Ok(rows.into_iter().flatten().collect())
}

fn width_diagnostics(rows: &[SweepRow]) -> SweepDiagnostics {
    let mut strictly_increasing = BTreeMap::new();
    for f in Framework::BOTH {
        let mut pts: Vec<(f64, f64)> =
            rows.iter().filter(|r| r.framework == f.name()).map(|r| (r.value, r.intrinsic_gain.unwrap())).collect();
        if pts.is_empty() {
            continue;
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        strictly_increasing.insert(f.name(), pts.windows(2).all(|w| w[1].1 > w[0].1));
    }
    let by_value = |f: Framework| -> BTreeMap<u64, f64> {
        rows.iter().filter(|r| r.framework == f.name()).map(|r| (r.value.to_bits(), r.intrinsic_gain.unwrap())).collect()
    };
    let (t, g) = (by_value(Framework::Transformation), by_value(Framework::Geometry));
    let transformation_ge_geometry =
        (!t.is_empty() && !g.is_empty()).then(|| t.iter().all(|(k, v)| g.get(k).map_or(true, |w| v >= w)));
    SweepDiagnostics { strictly_increasing, transformation_ge_geometry, eta_star: None }
}

/// One summary row per sweep point.
pub fn run_sweep(config: &ExperimentConfig) -> Result<RunArtifacts, RunError> {
    config.validate()?;
    let sweep = config.sweep.clone().ok_or_else(|| {
        ConfigError::Invalid(vec![crate::config::FieldError {
            field: "sweep".into(),
            message: "a sweep needs an axis and values".into(),
        }])
    })?;
    let mut summary = base_summary(config);
    let mut estimates = Vec::new();
    let (rows, diagnostics) = match sweep.axis {
        SweepAxis::PriorWidth => {
            let rows = width_rows(config, &sweep.values)?;
            let d = width_diagnostics(&rows);
            (rows, d)
        }
        SweepAxis::Eta => {
            let case = LifetimeCase::new(config.width(), config.probe_time, config.nodes())?;
            let optimum = case.probe_curve(&sweep.values)?;
            let rows = sweep
                .values
                .par_iter()
                .map(|&eta| Ok(strategy_row(eta, Framework::Transformation, &case.strategy(Framework::Transformation, eta)?)))
                .collect::<qsense_core::Result<Vec<_>>>()?;
            let d = SweepDiagnostics {
                strictly_increasing: BTreeMap::new(),
                transformation_ge_geometry: None,
                eta_star: Some(optimum.eta_star),
            };
            (rows, d)
        }
        SweepAxis::Shots => {
            let mut rows = Vec::new();
            for &mu in &sweep.values {
                let mut point = config.clone();
                point.sweep = None;
                point.shots = mu as usize;
                point.trajectory = false;
                let run = run_single(&point)?;
                for f in &run.summary.frameworks {
                    rows.push(SweepRow {
                        value: mu,
                        framework: f.framework,
                        gain: f.gain,
                        min_loss: f.min_loss,
                        intrinsic_gain: f.intrinsic_gain,
                        nsr: Some(f.nsr),
                        mean: Some(f.mean),
                    });
                }
                estimates.extend(run.estimates);
            }
            let d = SweepDiagnostics {
                strictly_increasing: BTreeMap::new(),
                transformation_ge_geometry: None,
                eta_star: None,
            };
            (rows, d)
        }
    };
    summary.sweep = Some(SweepSummary { axis: sweep.axis, rows, diagnostics });
    Ok(RunArtifacts { config: config.clone(), trajectory: Vec::new(), estimates, summary })
}

/// Dispatches on the presence of a sweep axis.
pub fn run(config: &ExperimentConfig) -> Result<RunArtifacts, RunError> {
    if config.sweep.is_some() {
        run_sweep(config)
    } else {
        run_single(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::preset;

    #[test]
    fn rate_preset_agrees_with_closed_form() {
        let out = run(&preset("rate").unwrap()).unwrap();
        assert!(out.summary.rate_check.as_ref().unwrap().agree);
    }

    #[test]
    fn repetitions_are_deterministic() {
        let mut c = preset("fig3-bottom").unwrap();
        c.grid_nodes = Some(256);
        let a = run(&c).unwrap();
        let b = run(&c).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.estimates.len(), 20);
        assert_eq!(a.trajectory.len(), 10 * 2 * 20);
    }

    #[test]
    fn eta_sweep_finds_excited_probe() {
        let mut c = preset("fig6").unwrap();
        c.grid_nodes = Some(256);
        let out = run(&c).unwrap();
        assert_eq!(out.summary.sweep.unwrap().diagnostics.eta_star, Some(1.0));
    }
}
