//! Rate estimation from exponential waiting times.

use crate::bayes::likelihood::{LikelihoodModel, OutcomeSpace};
use crate::bayes::{optimal_estimate, EstimateReport, PosteriorState};
use crate::error::{Error, Result};
use crate::numerics::{digamma, trigamma, Grid1D, RandomStream};
use crate::symmetry::{make_ignorance_prior, PriorKind, SymmetryFunction};

/// Waiting-time outcome grid: `[1e-12, 50] / theta`, logarithmic.
pub const OUTCOME_NODES: usize = 4096;
const OUTCOME_LOW: f64 = 1e-12;
const OUTCOME_HIGH: f64 = 50.0;

/// Hypothesis grid for the pipeline, relative to the mean waiting time.
pub const RATE_GRID_LOW: f64 = 1e-8;
pub const RATE_GRID_HIGH: f64 = 64.0;
pub const RATE_GRID_NODES: usize = 4096;

/// `p(t | theta) = theta exp(-theta t)` for a rate `theta`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ExponentialRateModel;

impl LikelihoodModel for ExponentialRateModel {
    fn outcome_space(&self, theta: f64, _control: f64) -> OutcomeSpace {
        let grid = Grid1D::logarithmic(OUTCOME_LOW / theta, OUTCOME_HIGH / theta, OUTCOME_NODES)
            .expect("positive rate gives a valid outcome grid");
        OutcomeSpace::Continuous(grid)
    }

    fn probability(&self, t: f64, theta: f64, _control: f64) -> f64 {
        if t < 0.0 || theta <= 0.0 {
            0.0
        } else {
            theta * (-theta * t).exp()
        }
    }

    fn ln_probability(&self, t: f64, theta: f64, _control: f64) -> f64 {
        if t < 0.0 || theta <= 0.0 {
            f64::NEG_INFINITY
        } else {
            theta.ln() - theta * t
        }
    }

    fn derivative(&self, t: f64, theta: f64, _control: f64) -> Option<f64> {
        Some((-theta * t).exp() * (1.0 - theta * t))
    }

    fn sample(&self, theta: f64, _control: f64, rng: &mut RandomStream) -> Result<f64> {
        rng.exponential(theta)
    }
}

/// Closed-form estimate and error for `mu` waiting times with mean `t_bar`,
/// Jeffreys prior on `(0, inf)` and `f = ln(theta / theta_u)`.
pub fn rate_closed_form(t_bar: f64, mu: usize, theta_u: f64) -> Result<EstimateReport> {
    if !(t_bar > 0.0 && t_bar.is_finite()) {
        return Err(Error::Domain(format!("mean waiting time must be positive, got {t_bar}")));
    }
    if mu == 0 {
        return Err(Error::Domain("need at least one waiting time".into()));
    }
    if !(theta_u > 0.0) {
        return Err(Error::Domain(format!("theta_u must be positive, got {theta_u}")));
    }
    let m = mu as f64;
    let psi0 = digamma(m)?;
    let psi1 = trigamma(m)?;
    let estimate = psi0.exp() / (m * t_bar);
    Ok(EstimateReport {
        estimate,
        error: estimate * psi1.sqrt(),
        empirical_loss: psi1,
        f_mean: psi0 - (m * theta_u * t_bar).ln(),
        out_of_range: false,
    })
}

/// Hypothesis grid `[1e-8, 64] / t_bar` used by [`rate_pipeline`].
pub fn rate_grid(t_bar: f64, nodes: usize) -> Result<Grid1D> {
    Grid1D::logarithmic(RATE_GRID_LOW / t_bar, RATE_GRID_HIGH / t_bar, nodes)
}

/// Grid posterior from a truncated Jeffreys prior and the generic optimal
/// estimator with `f = ln(theta / theta_u)`.
pub fn rate_pipeline(times: &[f64], theta_u: f64, nodes: usize) -> Result<EstimateReport> {
    if times.is_empty() {
        return Err(Error::Empty("waiting times"));
    }
    let t_bar = times.iter().sum::<f64>() / times.len() as f64;
    let grid = rate_grid(t_bar, nodes)?;
    let prior = make_ignorance_prior(PriorKind::JeffreysScale, &grid)?;
    let post = PosteriorState::from_prior(&prior).update_many(&ExponentialRateModel, times, &[0.0])?;
    optimal_estimate(&post, &SymmetryFunction::logarithmic(&grid, theta_u)?)
}
