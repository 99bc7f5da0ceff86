//! Coherence of a qubit `sqrt(1 - theta)|0> + sqrt(theta)|1>` after a
//! depolarising channel of strength `lambda`.

use num_complex::Complex64;

use crate::bayes::likelihood::{LikelihoodModel, OutcomeSpace};
use crate::bayes::EstimateReport;
use crate::error::{Error, Result};
use crate::numerics::{CMatrix, HermitianOperator};
use crate::strategy::QuantumModel;

/// Noise strength used throughout the worked example.
pub const DEFAULT_LAMBDA: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceModel {
    lambda: f64,
}

impl Default for CoherenceModel {
    fn default() -> Self {
        Self { lambda: DEFAULT_LAMBDA }
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&theta) {
        Ok(())
    } else {
        Err(Error::Domain(format!("coherence parameter must lie in [0, 1], got {theta}")))
    }
}

impl CoherenceModel {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::Domain(format!("depolarising strength must lie in [0, 1], got {lambda}")));
        }
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `p(1 | theta) = (1 - lambda) theta + lambda / 2` in the computational basis.
    pub fn likelihood(&self, s: u8, theta: f64) -> Result<f64> {
        check_theta(theta)?;
        let one = (1.0 - self.lambda) * theta + 0.5 * self.lambda;
        match s {
            0 => Ok(1.0 - one),
            1 => Ok(one),
            _ => Err(Error::Domain(format!("outcome must be 0 or 1, got {s}"))),
        }
    }

    /// `(1 - lambda)^2 / [theta (1 - theta)]`.
    pub fn qfi_closed_form(&self, theta: f64) -> f64 {
        (1.0 - self.lambda).powi(2) / (theta * (1.0 - theta))
    }

    /// `zeta(theta) = 2 (1 - lambda) sqrt(theta (1 - theta))`, the l1-norm of coherence.
    pub fn coherence(&self, theta: f64) -> f64 {
        2.0 * (1.0 - self.lambda) * (theta * (1.0 - theta)).max(0.0).sqrt()
    }

    /// Both preimages `(low, high)` of a coherence value.
    pub fn theta_for_coherence(&self, zeta: f64) -> Result<(f64, f64)> {
        let max = 1.0 - self.lambda;
        if !(0.0..=max).contains(&zeta) {
            return Err(Error::Domain(format!("coherence {zeta} outside [0, {max}]")));
        }
        let r = zeta / (2.0 * (1.0 - self.lambda));
        let d = (0.25 - r * r).max(0.0).sqrt();
        Ok((0.5 - d, 0.5 + d))
    }

    /// Coherence estimate and propagated error from a parameter estimate.
    pub fn quantifier(&self, estimate: f64, error: f64) -> Result<CoherenceQuantifier> {
        check_theta(estimate)?;
        let v = estimate * (1.0 - estimate);
        if v == 0.0 {
            return Ok(CoherenceQuantifier { zeta: 0.0, dzeta: f64::INFINITY, singular: true });
        }
        let dzeta = (1.0 - self.lambda) * (1.0 - 2.0 * estimate).abs() / v.sqrt() * error;
        Ok(CoherenceQuantifier { zeta: self.coherence(estimate), dzeta, singular: false })
    }
}

/// `p(s | theta)` for the worked example with `lambda = 1/10`.
pub fn coherence_likelihood(s: u8, theta: f64) -> Result<f64> {
    CoherenceModel::default().likelihood(s, theta)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceQuantifier {
    pub zeta: f64,
    pub dzeta: f64,
    /// Estimate at 0 or 1, where the propagated error diverges.
    pub singular: bool,
}

/// Coherence quantifier for the `lambda = 1/10` example.
pub fn coherence_quantifier(report: &EstimateReport) -> Result<CoherenceQuantifier> {
    CoherenceModel::default().quantifier(report.estimate, report.error)
}

fn real_matrix(a: f64, b: f64, d: f64) -> HermitianOperator {
    let m = CMatrix::from_row_slice(
        2,
        2,
        &[Complex64::new(a, 0.0), Complex64::new(b, 0.0), Complex64::new(b, 0.0), Complex64::new(d, 0.0)],
    );
    HermitianOperator::new(m).expect("real symmetric 2x2 is Hermitian")
}

impl QuantumModel for CoherenceModel {
    fn dim(&self) -> usize {
        2
    }

    fn state(&self, theta: f64, _control: f64) -> Result<HermitianOperator> {
        check_theta(theta)?;
        let k = 1.0 - self.lambda;
        let off = k * (theta * (1.0 - theta)).sqrt();
        Ok(real_matrix(k * (1.0 - theta) + 0.5 * self.lambda, off, k * theta + 0.5 * self.lambda))
    }

    fn dstate(&self, theta: f64, _control: f64) -> Result<HermitianOperator> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::Domain(format!("state derivative needs 0 < theta < 1, got {theta}")));
        }
        let k = 1.0 - self.lambda;
        let off = k * (1.0 - 2.0 * theta) / (2.0 * (theta * (1.0 - theta)).sqrt());
        Ok(real_matrix(-k, off, k))
    }

    fn control_name(&self) -> &str {
        "none"
    }
}

/// Computational-basis measurement: outcomes `s = 0, 1`.
impl LikelihoodModel for CoherenceModel {
    fn outcome_space(&self, _theta: f64, _control: f64) -> OutcomeSpace {
        OutcomeSpace::Discrete(vec![0.0, 1.0])
    }

    fn probability(&self, s: f64, theta: f64, _control: f64) -> f64 {
        self.likelihood(s as u8, theta).unwrap_or(0.0)
    }

    fn derivative(&self, s: f64, _theta: f64, _control: f64) -> Option<f64> {
        let k = 1.0 - self.lambda;
        Some(if s == 1.0 { k } else { -k })
    }
}
