//! Optimal estimator and error bar for the quadratic loss `[f(est) - f(theta)]^2`.

use crate::bayes::posterior::PosteriorState;
use crate::error::{Error, Result};
use crate::symmetry::SymmetryFunction;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateReport {
    /// `f^{-1}(<f>)`.
    pub estimate: f64,
    /// `sqrt(loss) / |f'(estimate)|`.
    pub error: f64,
    /// Posterior variance of `f`, in units of `f^2`.
    pub empirical_loss: f64,
    /// Posterior mean of `f`.
    pub f_mean: f64,
    /// `f_mean` fell outside the tabulated range of `f` and was clamped.
    pub out_of_range: bool,
}

impl EstimateReport {
    /// Builds a report from posterior moments of `f`.
    pub fn from_moments(f: &SymmetryFunction, f_mean: f64, empirical_loss: f64) -> Self {
        let inv = f.inverse(f_mean);
        let slope = f.derivative(inv.x).abs();
        let error = if empirical_loss == 0.0 { 0.0 } else { empirical_loss.sqrt() / slope };
        Self { estimate: inv.x, error, empirical_loss, f_mean, out_of_range: inv.clamped }
    }
}

/// Posterior mean of `f`, mapped back through `f^{-1}`, with the posterior
/// variance of `f` as the empirical loss.
pub fn optimal_estimate(state: &PosteriorState, f: &SymmetryFunction) -> Result<EstimateReport> {
    if !state.grid().same_as(f.grid()) {
        return Err(Error::GridMismatch);
    }
    let values = f.values();
    let f_mean = state.expectation(values)?;
    let centred: Vec<f64> = values.iter().map(|v| (v - f_mean).powi(2)).collect();
    let loss = state.expectation(&centred)?.max(0.0);
    Ok(EstimateReport::from_moments(f, f_mean, loss))
}
