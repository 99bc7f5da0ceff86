//! Classical Fisher information and Kullback-Leibler divergence of a
//! likelihood model.

use crate::bayes::likelihood::{LikelihoodModel, OutcomeSpace};
use crate::error::{Error, Result};

/// Probabilities below this are floored when their derivative is nonzero.
pub const PROBABILITY_FLOOR: f64 = 1e-15;

/// Relative step of the central difference in `theta`.
pub const FISHER_STEP: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherInformation {
    pub value: f64,
    /// Outcomes whose probability was floored.
    pub regularized: usize,
}

fn theta_derivative(model: &dyn LikelihoodModel, x: f64, theta: f64, control: f64) -> f64 {
    if let Some(d) = model.derivative(x, theta, control) {
        return d;
    }
    let h = FISHER_STEP * theta.abs().max(model.theta_scale());
    (model.probability(x, theta + h, control) - model.probability(x, theta - h, control)) / (2.0 * h)
}

/// `sum_x (d_theta p)^2 / p`, or its integral for continuous outcomes.
pub fn classical_fisher(model: &dyn LikelihoodModel, theta: f64, control: f64) -> FisherInformation {
    let mut regularized = 0;
    let mut term = |x: f64| {
        let p = model.probability(x, theta, control);
        let d = theta_derivative(model, x, theta, control);
        if d == 0.0 {
            return 0.0;
        }
        if p < PROBABILITY_FLOOR {
            regularized += 1;
            return d * d / PROBABILITY_FLOOR;
        }
        d * d / p
    };
    let value = match model.outcome_space(theta, control) {
        OutcomeSpace::Discrete(labels) => labels.iter().map(|&x| term(x)).sum(),
        OutcomeSpace::Continuous(grid) => {
            grid.nodes().iter().zip(grid.weights()).map(|(&x, w)| w * term(x)).sum()
        }
    };
    FisherInformation { value, regularized }
}

/// `KL(p_theta || p_other) = sum_x p_theta ln(p_theta / p_other)`.
pub fn kl_divergence(model: &dyn LikelihoodModel, theta: f64, other: f64, control: f64) -> Result<f64> {
    let term = |x: f64| -> Result<f64> {
        let p = model.probability(x, theta, control);
        if p == 0.0 {
            return Ok(0.0);
        }
        let q = model.probability(x, other, control);
        if q == 0.0 {
            return Err(Error::Domain(format!("divergence infinite: outcome {x} impossible at {other}")));
        }
        Ok(p * (model.ln_probability(x, theta, control) - model.ln_probability(x, other, control)))
    };
    match model.outcome_space(theta, control) {
        OutcomeSpace::Discrete(labels) => labels.iter().map(|&x| term(x)).sum(),
        OutcomeSpace::Continuous(grid) => grid
            .nodes()
            .iter()
            .zip(grid.weights())
            .map(|(&x, w)| term(x).map(|v| w * v))
            .sum(),
    }
}
