//! Classical likelihood models `p(x | theta, y)`.

use crate::error::{Error, Result};
use crate::numerics::rng::PROBABILITY_SUM_TOLERANCE;
use crate::numerics::{Grid1D, RandomStream};

/// Where outcomes live.
#[derive(Debug, Clone, PartialEq)]
pub enum OutcomeSpace {
    /// Finitely many labelled outcomes.
    Discrete(Vec<f64>),
    /// A real interval, integrated with the grid's quadrature.
    Continuous(Grid1D),
}

/// `p(x | theta, y)` with outcome `x`, hypothesis `theta` and control `y`.
pub trait LikelihoodModel: Sync {
    /// Outcomes reachable at `(theta, control)`. Continuous spaces may adapt
    /// their grid to `theta`.
    fn outcome_space(&self, theta: f64, control: f64) -> OutcomeSpace;

    /// Probability (discrete) or density (continuous) of `outcome`.
    fn probability(&self, outcome: f64, theta: f64, control: f64) -> f64;

    fn ln_probability(&self, outcome: f64, theta: f64, control: f64) -> f64 {
        self.probability(outcome, theta, control).ln()
    }

    /// Analytic `d p / d theta`, when known.
    fn derivative(&self, _outcome: f64, _theta: f64, _control: f64) -> Option<f64> {
        None
    }

    /// Typical magnitude of `theta`, used to size numeric derivative steps.
    fn theta_scale(&self) -> f64 {
        1.0
    }

    /// Draws one outcome at `(theta, control)`.
    ///
    /// The default handles discrete spaces by inverse-CDF sampling; models
    /// with continuous outcomes must override it.
    fn sample(&self, theta: f64, control: f64, rng: &mut RandomStream) -> Result<f64> {
        match self.outcome_space(theta, control) {
            OutcomeSpace::Discrete(labels) => {
                let probs: Vec<f64> =
                    labels.iter().map(|&x| self.probability(x, theta, control)).collect();
                let total: f64 = probs.iter().sum();
                if (total - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
                    return Err(Error::Normalization(total));
                }
                Ok(labels[rng.categorical(&probs)?])
            }
            OutcomeSpace::Continuous(_) => Err(Error::Domain(
                "continuous likelihood has no sampler".into(),
            )),
        }
    }
}

/// Total probability over the outcome space (1 for a valid model).
pub fn total_probability(model: &dyn LikelihoodModel, theta: f64, control: f64) -> f64 {
    match model.outcome_space(theta, control) {
        OutcomeSpace::Discrete(labels) => {
            labels.iter().map(|&x| model.probability(x, theta, control)).sum()
        }
        OutcomeSpace::Continuous(grid) => grid
            .nodes()
            .iter()
            .zip(grid.weights())
            .map(|(&x, w)| w * model.probability(x, theta, control))
            .sum(),
    }
}

#[cfg(test)]
pub(crate) mod test_models {
    use super::*;

    /// `p(1 | theta) = theta`, `p(0 | theta) = 1 - theta`.
    pub struct Bernoulli;

    impl LikelihoodModel for Bernoulli {
        fn outcome_space(&self, _: f64, _: f64) -> OutcomeSpace {
            OutcomeSpace::Discrete(vec![0.0, 1.0])
        }

        fn probability(&self, x: f64, theta: f64, _: f64) -> f64 {
            if x == 1.0 {
                theta
            } else {
                1.0 - theta
            }
        }
    }

    /// Fair coin regardless of `theta`.
    pub struct Uninformative;

    impl LikelihoodModel for Uninformative {
        fn outcome_space(&self, _: f64, _: f64) -> OutcomeSpace {
            OutcomeSpace::Discrete(vec![0.0, 1.0])
        }

        fn probability(&self, _: f64, _: f64, _: f64) -> f64 {
            0.5
        }
    }
}
