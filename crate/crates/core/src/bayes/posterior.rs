//! Grid posteriors updated in the log domain.

use crate::bayes::likelihood::LikelihoodModel;
use crate::error::{Error, Result};
use crate::numerics::Grid1D;
use crate::symmetry::PriorDensity;

/// Normalized posterior on a grid with its running evidence.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorState {
    grid: Grid1D,
    ln_density: Vec<f64>,
    density: Vec<f64>,
    shot_count: usize,
    log_evidence: f64,
}

impl PosteriorState {
    pub fn from_prior(prior: &PriorDensity) -> Self {
        let density = prior.density().to_vec();
        let ln_density = density.iter().map(|p| p.ln()).collect();
        Self { grid: prior.grid().clone(), ln_density, density, shot_count: 0, log_evidence: 0.0 }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn shot_count(&self) -> usize {
        self.shot_count
    }

    /// `ln p(x_1..x_n)` accumulated over all updates.
    pub fn log_evidence(&self) -> f64 {
        self.log_evidence
    }

    /// The posterior as a prior for the next stage.
    pub fn to_prior(&self) -> Result<PriorDensity> {
        PriorDensity::custom(&self.grid, self.density.clone())
    }

    /// `int p(theta | data) g(theta)` for `g` tabulated on the grid.
    pub fn expectation(&self, values: &[f64]) -> Result<f64> {
        self.grid.check_len(values.len())?;
        Ok(self
            .grid
            .weights()
            .iter()
            .zip(&self.density)
            .zip(values)
            .map(|((w, p), v)| if *p == 0.0 { 0.0 } else { w * p * v })
            .sum())
    }

    /// Bayes's rule for one outcome.
    pub fn bayes_update(&self, model: &dyn LikelihoodModel, outcome: f64, control: f64) -> Result<Self> {
        self.update_many(model, &[outcome], &[control])
    }

    /// Bayes's rule for a batch; `controls` holds one value per outcome or a
    /// single value shared by all.
    pub fn update_many(&self, model: &dyn LikelihoodModel, outcomes: &[f64], controls: &[f64]) -> Result<Self> {
        let control_at = control_lookup(outcomes.len(), controls)?;
        let mut ln_unnorm = self.ln_density.clone();
        for (k, &x) in outcomes.iter().enumerate() {
            let y = control_at(k);
            let mut any = false;
            for (lp, &theta) in ln_unnorm.iter_mut().zip(self.grid.nodes()) {
                if *lp == f64::NEG_INFINITY {
                    continue;
                }
                let ll = model.ln_probability(x, theta, y);
                if ll > f64::NEG_INFINITY {
                    any = true;
                }
                *lp += ll;
            }
            if !any {
                return Err(Error::Contradiction(format!("{x} (shot {})", self.shot_count + k + 1)));
            }
        }
        let (ln_density, density, ln_z) = normalize(&self.grid, ln_unnorm)?;
        Ok(Self {
            grid: self.grid.clone(),
            ln_density,
            density,
            shot_count: self.shot_count + outcomes.len(),
            log_evidence: self.log_evidence + ln_z,
        })
    }
}

fn control_lookup(n: usize, controls: &[f64]) -> Result<impl Fn(usize) -> f64 + '_> {
    if !(controls.len() == n || controls.len() == 1 || (n == 0 && controls.is_empty())) {
        return Err(Error::LengthMismatch { expected: n, got: controls.len() });
    }
    Ok(move |k: usize| if controls.len() == 1 { controls[0] } else { controls[k] })
}

/// Normalizes `exp(ln_unnorm)` over the grid; returns the log-normalizer.
fn normalize(grid: &Grid1D, ln_unnorm: Vec<f64>) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let max = ln_unnorm.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return Err(Error::Contradiction("posterior vanishes on the whole grid".into()));
    }
    let scaled: Vec<f64> = ln_unnorm.iter().map(|l| (l - max).exp()).collect();
    let z = grid.integrate(&scaled)?;
    if !(z > 0.0) {
        return Err(Error::Contradiction("posterior mass underflows on the grid".into()));
    }
    let ln_z = max + z.ln();
    let ln_density: Vec<f64> = ln_unnorm.iter().map(|l| l - ln_z).collect();
    let density = scaled.iter().map(|s| s / z).collect();
    Ok((ln_density, density, ln_z))
}

/// `ln int p(theta) prod_i p(x_i | theta, y_i)`.
pub fn ln_evidence(prior: &PriorDensity, model: &dyn LikelihoodModel, outcomes: &[f64], controls: &[f64]) -> Result<f64> {
    if outcomes.is_empty() {
        return Ok(0.0);
    }
    Ok(PosteriorState::from_prior(prior).update_many(model, outcomes, controls)?.log_evidence())
}

/// `int p(theta) prod_i p(x_i | theta, y_i)`; 1 for no data.
pub fn evidence(prior: &PriorDensity, model: &dyn LikelihoodModel, outcomes: &[f64], controls: &[f64]) -> Result<f64> {
    ln_evidence(prior, model, outcomes, controls).map(f64::exp)
}
