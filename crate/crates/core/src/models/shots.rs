//! Shot simulation and repetition statistics.

use crate::bayes::likelihood::{LikelihoodModel, OutcomeSpace};
use crate::error::{Error, Result};
use crate::numerics::RandomStream;

/// Simulated outcomes of `mu` shots at a fixed true parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct ShotBatch {
    /// Outcome labels for discrete models, waiting times for continuous ones.
    pub outcomes: Vec<f64>,
    pub controls: Vec<f64>,
    pub seed: u64,
    pub stream_id: u64,
    pub true_theta: f64,
}

impl ShotBatch {
    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    /// Mean of the outcomes; the sample mean waiting time for rate data.
    pub fn mean(&self) -> Result<f64> {
        if self.outcomes.is_empty() {
            return Err(Error::Empty("shot batch"));
        }
        Ok(self.outcomes.iter().sum::<f64>() / self.outcomes.len() as f64)
    }
}

/// Tolerance on `sum_x p(x)` for discrete outcome spaces.
pub const SAMPLING_SUM_TOLERANCE: f64 = 1e-8;

/// Draws `mu` i.i.d. outcomes from `model` at `true_theta`.
///
/// `controls` holds either one control per shot or a single repeated value.
pub fn simulate_shots(
    model: &dyn LikelihoodModel,
    true_theta: f64,
    mu: usize,
    controls: &[f64],
    rng: &mut RandomStream,
) -> Result<ShotBatch> {
    if mu == 0 {
        return Err(Error::Domain("need at least one shot".into()));
    }
    let controls: Vec<f64> = match controls.len() {
        1 => vec![controls[0]; mu],
        n if n == mu => controls.to_vec(),
        n => return Err(Error::LengthMismatch { expected: mu, got: n }),
    };
    let mut outcomes = Vec::with_capacity(mu);
    for &y in &controls {
        if let OutcomeSpace::Discrete(xs) = model.outcome_space(true_theta, y) {
            let total: f64 = xs.iter().map(|&x| model.probability(x, true_theta, y)).sum();
            if !((total - 1.0).abs() <= SAMPLING_SUM_TOLERANCE) {
                return Err(Error::Normalization(total));
            }
        }
        outcomes.push(model.sample(true_theta, y, rng)?);
    }
    Ok(ShotBatch { outcomes, controls, seed: rng.seed(), stream_id: rng.stream_id(), true_theta })
}

/// Noise-to-signal ratio `var(x) / mean(x)^2` with population normalization.
pub fn nsr(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Empty("no values for the noise-to-signal ratio"));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if mean == 0.0 {
        return Err(Error::Domain("noise-to-signal ratio undefined for zero mean".into()));
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    Ok(var / (mean * mean))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{CoherenceModel, ExponentialRateModel, LifetimeModel};

    fn frequency(batch: &ShotBatch) -> f64 {
        batch.outcomes.iter().filter(|&&s| s == 1.0).count() as f64 / batch.len() as f64
    }

    #[test]
    fn nsr_by_hand() {
        assert_eq!(nsr(&[2.0; 5]).unwrap(), 0.0);
        assert!((nsr(&[1.0, 3.0]).unwrap() - 0.25).abs() < 1e-15);
        assert!(nsr(&[1.0, -1.0]).is_err());
        assert!(nsr(&[]).is_err());
    }

    #[test]
    fn coherence_frequency() {
        let mut rng = RandomStream::new(11, 0);
        let b = simulate_shots(&CoherenceModel::default(), 0.8, 100_000, &[0.0], &mut rng).unwrap();
        let sigma = (0.77f64 * 0.23 / 1e5).sqrt();
        assert!((frequency(&b) - 0.77).abs() < 3.0 * sigma);
    }

    #[test]
    fn lifetime_frequency() {
        let lik = LifetimeModel::new(1.0, 1.0).unwrap().energy_likelihood().unwrap();
        let mut rng = RandomStream::new(12, 0);
        let b = simulate_shots(&lik, 1.0, 100_000, &[1.0], &mut rng).unwrap();
        let p = (-1.0f64).exp();
        assert!((frequency(&b) - p).abs() < 3.0 * (p * (1.0 - p) / 1e5).sqrt());
    }

    #[test]
    fn exponential_mean() {
        let mut rng = RandomStream::new(13, 0);
        let b = simulate_shots(&ExponentialRateModel, 2.0, 100_000, &[0.0], &mut rng).unwrap();
        assert!((b.mean().unwrap() - 0.5).abs() < 3.0 * 0.5 / 1e5f64.sqrt());
    }

    #[test]
    fn reproducible_and_validated() {
        let m = CoherenceModel::default();
        let a = simulate_shots(&m, 0.3, 50, &[0.0], &mut RandomStream::new(5, 2)).unwrap();
        let b = simulate_shots(&m, 0.3, 50, &[0.0], &mut RandomStream::new(5, 2)).unwrap();
        assert_eq!(a, b);
        assert_eq!((a.seed, a.stream_id), (5, 2));
        assert!(simulate_shots(&m, 0.3, 3, &[0.0, 0.0], &mut RandomStream::new(0, 0)).is_err());
        assert!(simulate_shots(&m, 0.3, 0, &[0.0], &mut RandomStream::new(0, 0)).is_err());
    }
}
