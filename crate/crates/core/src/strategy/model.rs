//! Parametrized quantum states, POVMs and the Born-rule likelihood.

use crate::bayes::likelihood::{LikelihoodModel, OutcomeSpace};
use crate::error::{Error, Result};
use crate::numerics::linalg::frobenius;
use crate::numerics::{eigh, HermitianOperator};

/// Relative step of the default central-difference state derivative.
pub const STATE_STEP: f64 = 1e-6;

/// `(theta, y) -> rho_y(theta)` on a `dim`-level system.
pub trait QuantumModel: Sync {
    fn dim(&self) -> usize;

    fn state(&self, theta: f64, control: f64) -> Result<HermitianOperator>;

    /// `d rho / d theta`; central difference unless overridden.
    fn dstate(&self, theta: f64, control: f64) -> Result<HermitianOperator> {
        let h = STATE_STEP * self.theta_scale();
        let plus = self.state(theta + h, control)?;
        let minus = self.state(theta - h, control)?;
        Ok((&plus - &minus).scale(0.5 / h))
    }

    fn theta_scale(&self) -> f64 {
        1.0
    }

    fn default_control(&self) -> f64 {
        0.0
    }

    /// Label of the control parameter, with units.
    fn control_name(&self) -> &str {
        "control"
    }
}

/// Positive operators summing to the identity, with one label per outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    elements: Vec<HermitianOperator>,
    labels: Vec<f64>,
}

/// Tolerance for POVM positivity and completeness.
pub const POVM_TOLERANCE: f64 = 1e-10;

impl Povm {
    pub fn new(elements: Vec<HermitianOperator>, labels: Vec<f64>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Empty("POVM without elements"));
        }
        if labels.len() != elements.len() {
            return Err(Error::LengthMismatch { expected: elements.len(), got: labels.len() });
        }
        let dim = elements[0].dim();
        if let Some(e) = elements.iter().find(|e| e.dim() != dim) {
            return Err(Error::DimensionMismatch(dim, e.dim()));
        }
        let povm = Self { elements, labels };
        let (completeness, min_eigenvalue) = povm.defects();
        if completeness > POVM_TOLERANCE || min_eigenvalue < -POVM_TOLERANCE {
            return Err(Error::Domain(format!(
                "not a POVM: |sum - I| = {completeness:.3e}, smallest eigenvalue {min_eigenvalue:.3e}"
            )));
        }
        Ok(povm)
    }

    /// Projectors onto the standard basis, labelled `0..dim`.
    pub fn computational_basis(dim: usize) -> Self {
        let elements = (0..dim)
            .map(|k| {
                let mut d = vec![0.0; dim];
                d[k] = 1.0;
                HermitianOperator::diagonal(&d)
            })
            .collect();
        Self { elements, labels: (0..dim).map(|k| k as f64).collect() }
    }

    pub fn elements(&self) -> &[HermitianOperator] {
        &self.elements
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    /// `(||sum_k M_k - I||_F, min_k lambda_min(M_k))`.
    pub fn defects(&self) -> (f64, f64) {
        let dim = self.dim();
        let mut sum = HermitianOperator::zeros(dim);
        let mut min_eigenvalue = f64::INFINITY;
        for e in &self.elements {
            sum.add_scaled(1.0, e);
            min_eigenvalue = min_eigenvalue.min(eigh(e).values[0]);
        }
        let completeness = frobenius(&(sum.matrix() - HermitianOperator::identity(dim).matrix()));
        (completeness, min_eigenvalue)
    }

    /// Born-rule probabilities `Tr(M_k rho)`.
    pub fn probabilities(&self, rho: &HermitianOperator) -> Vec<f64> {
        self.elements.iter().map(|e| e.trace_product(rho)).collect()
    }
}

/// `p(k | theta, y) = Tr[M_k rho_y(theta)]`, outcomes indexed `0..len`.
pub struct BornLikelihood<'a, M: QuantumModel + ?Sized> {
    pub model: &'a M,
    pub povm: &'a Povm,
}

impl<'a, M: QuantumModel + ?Sized> BornLikelihood<'a, M> {
    pub fn new(model: &'a M, povm: &'a Povm) -> Result<Self> {
        if model.dim() != povm.dim() {
            return Err(Error::DimensionMismatch(model.dim(), povm.dim()));
        }
        Ok(Self { model, povm })
    }
}

impl<M: QuantumModel + ?Sized> LikelihoodModel for BornLikelihood<'_, M> {
    fn outcome_space(&self, _theta: f64, _control: f64) -> OutcomeSpace {
        OutcomeSpace::Discrete((0..self.povm.len()).map(|k| k as f64).collect())
    }

    fn probability(&self, outcome: f64, theta: f64, control: f64) -> f64 {
        let k = outcome as usize;
        match self.model.state(theta, control) {
            Ok(rho) if k < self.povm.len() => self.povm.elements[k].trace_product(&rho).max(0.0),
            _ => 0.0,
        }
    }

    fn derivative(&self, outcome: f64, theta: f64, control: f64) -> Option<f64> {
        let k = outcome as usize;
        let d = self.model.dstate(theta, control).ok()?;
        Some(self.povm.elements.get(k)?.trace_product(&d))
    }

    fn theta_scale(&self) -> f64 {
        self.model.theta_scale()
    }
}
