//! Adaptive protocols and probe-state optimisation.

use crate::bayes::{optimal_estimate, EstimateReport, LikelihoodModel, PosteriorState};
use crate::error::{Error, Result};
use crate::numerics::RandomStream;
use crate::strategy::model::{BornLikelihood, QuantumModel};
use crate::strategy::optimal::{optimal_strategy, StrategyReport};
use crate::symmetry::{PriorDensity, SymmetryFunction};

/// One shot of an adaptive run.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveStep {
    pub control: f64,
    /// Index of the POVM element that fired.
    pub outcome: usize,
    /// Its label, an eigenvalue of `S` in units of `f`.
    pub label: f64,
    /// Single-shot estimate attached to the outcome.
    pub shot_estimate: f64,
    pub gain: f64,
    /// Running estimate after the update.
    pub report: EstimateReport,
}

/// Control in `candidates` whose optimal strategy has the largest gain under
/// `prior`; the first one wins ties.
pub fn best_control<M: QuantumModel + ?Sized>(
    model: &M,
    prior: &PriorDensity,
    f: &SymmetryFunction,
    candidates: &[f64],
) -> Result<(f64, StrategyReport)> {
    let mut best: Option<(f64, StrategyReport)> = None;
    for &y in candidates {
        let report = optimal_strategy(model, prior, f, y)?;
        if best.as_ref().map_or(true, |(_, b)| report.gain > b.gain) {
            best = Some((y, report));
        }
    }
    best.ok_or(Error::Empty("no candidate controls"))
}

/// Runs `shots` rounds of: pick the gain-maximizing control, measure the
/// optimal POVM on `rho(true_theta)`, update the posterior.
///
/// `f` stays fixed for the whole run.
pub fn adaptive_loop<M: QuantumModel + ?Sized>(
    model: &M,
    initial_prior: &PriorDensity,
    f: &SymmetryFunction,
    candidates: &[f64],
    true_theta: f64,
    shots: usize,
    rng: &mut RandomStream,
) -> Result<Vec<AdaptiveStep>> {
    if candidates.is_empty() {
        return Err(Error::Empty("no candidate controls"));
    }
    initial_prior.same_grid(f.grid())?;
    let mut posterior = PosteriorState::from_prior(initial_prior);
    let mut prior = initial_prior.clone();
    let mut steps = Vec::with_capacity(shots);
    for _ in 0..shots {
        let (control, strategy) = best_control(model, &prior, f, candidates)?;
        let likelihood = BornLikelihood::new(model, &strategy.povm)?;
        let outcome = likelihood.sample(true_theta, control, rng)? as usize;
        posterior = posterior.bayes_update(&likelihood, outcome as f64, control)?;
        prior = posterior.to_prior()?;
        steps.push(AdaptiveStep {
            control,
            outcome,
            label: strategy.povm.labels()[outcome],
            shot_estimate: strategy.estimates[outcome],
            gain: strategy.gain,
            report: optimal_estimate(&posterior, f)?,
        });
    }
    Ok(steps)
}

/// Gain as a function of the probe parameter and its maximizer.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeOptimum {
    pub eta_star: f64,
    pub gains: Vec<f64>,
}

/// Relative slack under which two gains count as tied.
pub const GAIN_TIE: f64 = 1e-12;

/// Maximizes the gain over `eta_grid` for a fixed prior and `f`; ties go to
/// the larger `eta`.
pub fn optimize_probe<M, F>(family: F, prior: &PriorDensity, f: &SymmetryFunction, eta_grid: &[f64]) -> Result<ProbeOptimum>
where
    M: QuantumModel,
    F: Fn(f64) -> Result<M>,
{
    if eta_grid.is_empty() {
        return Err(Error::Empty("probe parameter grid"));
    }
    let mut gains = Vec::with_capacity(eta_grid.len());
    for &eta in eta_grid {
        let model = family(eta)?;
        gains.push(optimal_strategy(&model, prior, f, model.default_control())?.gain);
    }
    let mut star = 0;
    for k in 1..gains.len() {
        let (g, best) = (gains[k], gains[star]);
        let tied = (g - best).abs() <= GAIN_TIE * best.abs().max(g.abs());
        if g > best && !tied || tied && eta_grid[k] > eta_grid[star] {
            star = k;
        }
    }
    Ok(ProbeOptimum { eta_star: eta_grid[star], gains })
}

/// As [`optimize_probe`], for callers whose prior and symmetry function are
/// built per `eta`.
///
/// Probe optimisation compares gains of one loss function, so `f` and the
/// prior must not move with `eta`; any change is rejected.
pub fn optimize_probe_checked<M, F, S>(
    family: F,
    setup: S,
    eta_grid: &[f64],
) -> Result<ProbeOptimum>
where
    M: QuantumModel,
    F: Fn(f64) -> Result<M>,
    S: Fn(f64) -> Result<(PriorDensity, SymmetryFunction)>,
{
    let first = eta_grid.first().ok_or(Error::Empty("probe parameter grid"))?;
    let (prior, f) = setup(*first)?;
    for &eta in &eta_grid[1..] {
        let (p, g) = setup(eta)?;
        let same_prior = p.grid().same_as(prior.grid())
            && p.density().iter().zip(prior.density()).all(|(a, b)| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()));
        if !same_prior || !g.agrees_with(&f, 1e-12) {
            return Err(Error::EtaDependentSymmetry { eta });
        }
    }
    optimize_probe(family, &prior, &f, eta_grid)
}
