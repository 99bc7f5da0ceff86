//! End-to-end pipelines for the coherence and lifetime case studies.

use crate::bayes::{optimal_estimate, EstimateReport, LikelihoodModel, PosteriorState};
use crate::error::{Error, Result};
use crate::models::coherence::{CoherenceModel, CoherenceQuantifier};
use crate::models::lifetime::{lifetime_qfi, LifetimeModel};
use crate::models::shots::ShotBatch;
use crate::numerics::Grid1D;
use crate::strategy::{optimal_strategy, optimize_probe, ProbeOptimum, StrategyReport};
use crate::symmetry::{
    make_ignorance_prior, prior_from_fisher_curve, symmetry_from_prior, PriorDensity, PriorKind, SymmetryFunction,
};

/// Which principle fixes the prior and the loss.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Framework {
    /// Invariance under the parameter's transformation group.
    Transformation,
    /// Square root of the quantum Fisher information.
    Geometry,
}

impl Framework {
    pub const BOTH: [Framework; 2] = [Framework::Transformation, Framework::Geometry];

    pub fn name(self) -> &'static str {
        match self {
            Framework::Transformation => "transformation",
            Framework::Geometry => "geometry",
        }
    }

    /// Single-letter tag, `T` or `G`.
    pub fn tag(self) -> &'static str {
        match self {
            Framework::Transformation => "T",
            Framework::Geometry => "G",
        }
    }
}

/// Prior and symmetry function on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseSetup {
    pub framework: Framework,
    pub prior: PriorDensity,
    pub f: SymmetryFunction,
}

/// Default hypothesis-grid size for the case studies.
pub const CASE_NODES: usize = 1024;

/// Coherence case on `(1 - a, a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceCase {
    pub model: CoherenceModel,
    pub a: f64,
    pub nodes: usize,
}

impl CoherenceCase {
    pub fn new(model: CoherenceModel, a: f64, nodes: usize) -> Result<Self> {
        if !(a > 0.5 && a < 1.0) {
            return Err(Error::Domain(format!("prior width a must lie in (1/2, 1), got {a}")));
        }
        Ok(Self { model, a, nodes })
    }

    pub fn grid(&self) -> Result<Grid1D> {
        Grid1D::logit(1.0 - self.a, self.a, self.nodes)
    }

    /// `T`: weight prior with hyperbolic loss. `G`: `sqrt(QFI)` prior with
    /// `2 arctan sqrt(theta / (1 - theta))`.
    pub fn setup(&self, framework: Framework) -> Result<CaseSetup> {
        let grid = self.grid()?;
        let (prior, f) = match framework {
            Framework::Transformation => {
                (make_ignorance_prior(PriorKind::Weight, &grid)?, SymmetryFunction::hyperbolic(&grid)?)
            }
            Framework::Geometry => {
                let fisher: Vec<f64> = grid.nodes().iter().map(|&t| self.model.qfi_closed_form(t)).collect();
                (prior_from_fisher_curve(&fisher, &grid)?, SymmetryFunction::arctan_odds(&grid)?)
            }
        };
        Ok(CaseSetup { framework, prior, f })
    }

    pub fn strategy(&self, framework: Framework) -> Result<StrategyReport> {
        let s = self.setup(framework)?;
        optimal_strategy(&self.model, &s.prior, &s.f, 0.0)
    }
}

/// Lifetime case on `(t / b, t b)` with probe time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LifetimeCase {
    pub b: f64,
    pub t: f64,
    pub nodes: usize,
}

impl LifetimeCase {
    pub fn new(b: f64, t: f64, nodes: usize) -> Result<Self> {
        if !(b > 1.0 && b.is_finite()) {
            return Err(Error::Domain(format!("prior width b must exceed 1, got {b}")));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!("probe time must be positive, got {t}")));
        }
        Ok(Self { b, t, nodes })
    }

    pub fn grid(&self) -> Result<Grid1D> {
        Grid1D::logarithmic(self.t / self.b, self.t * self.b, self.nodes)
    }

    /// `T`: Jeffreys prior with `ln(theta / t)`. `G`: `sqrt(QFI)` prior of the
    /// excited-state probe with its closed-form symmetry function.
    pub fn setup(&self, framework: Framework) -> Result<CaseSetup> {
        let grid = self.grid()?;
        let (prior, f) = match framework {
            Framework::Transformation => (
                make_ignorance_prior(PriorKind::JeffreysScale, &grid)?,
                SymmetryFunction::logarithmic(&grid, self.t)?,
            ),
            Framework::Geometry => {
                (self.geometric_prior(1.0, &grid)?, SymmetryFunction::lifetime_geometric(&grid, self.t)?)
            }
        };
        Ok(CaseSetup { framework, prior, f })
    }

    /// Geometric setup for a general probe `eta`, with `f` tabulated by
    /// cumulative quadrature of `sqrt(QFI)`.
    ///
    /// Expensive relative to [`LifetimeCase::setup`] and opt-in.
    pub fn geometric_setup_tabulated(&self, eta: f64) -> Result<CaseSetup> {
        let grid = self.grid()?;
        let prior = self.geometric_prior(eta, &grid)?;
        // f(theta) = -int_0^theta sqrt(I), matching the closed form at eta = 1
        let z = prior.normalization();
        let f = symmetry_from_prior(&prior, -z, -self.lower_tail(eta)?)?;
        Ok(CaseSetup { framework: Framework::Geometry, prior, f })
    }

    /// `int_0^{t / b} sqrt(I)`; the integrand decays like `exp(-t / 2 theta)`.
    fn lower_tail(&self, eta: f64) -> Result<f64> {
        let end = self.t / self.b;
        let tail = Grid1D::logarithmic(end * 1e-4, end, 2048)?;
        let sqrt_i = tail
            .nodes()
            .iter()
            .map(|&th| lifetime_qfi(th, self.t, eta).map(f64::sqrt))
            .collect::<Result<Vec<_>>>()?;
        tail.integrate(&sqrt_i)
    }

    fn geometric_prior(&self, eta: f64, grid: &Grid1D) -> Result<PriorDensity> {
        let fisher = grid.nodes().iter().map(|&th| lifetime_qfi(th, self.t, eta)).collect::<Result<Vec<_>>>()?;
        prior_from_fisher_curve(&fisher, grid)
    }

    pub fn strategy(&self, framework: Framework, eta: f64) -> Result<StrategyReport> {
        let s = self.setup(framework)?;
        optimal_strategy(&LifetimeModel::new(eta, self.t)?, &s.prior, &s.f, self.t)
    }

    /// Gain of the scale framework over `eta_grid` and its maximizer.
    pub fn probe_curve(&self, eta_grid: &[f64]) -> Result<ProbeOptimum> {
        let s = self.setup(Framework::Transformation)?;
        optimize_probe(|eta| LifetimeModel::new(eta, self.t), &s.prior, &s.f, eta_grid)
    }
}

/// Final estimate of one repetition, with the running estimate after each
/// shot when requested.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationRun {
    pub framework: Framework,
    pub report: EstimateReport,
    pub trajectory: Vec<EstimateReport>,
}

/// Updates `setup.prior` with `batch` and applies the optimal estimator.
pub fn estimate_batch(
    setup: &CaseSetup,
    model: &dyn LikelihoodModel,
    batch: &ShotBatch,
    track: bool,
) -> Result<EstimationRun> {
    let start = PosteriorState::from_prior(&setup.prior);
    if !track {
        let post = start.update_many(model, &batch.outcomes, &batch.controls)?;
        return Ok(EstimationRun { framework: setup.framework, report: optimal_estimate(&post, &setup.f)?, trajectory: vec![] });
    }
    let mut post = start;
    let mut trajectory = Vec::with_capacity(batch.len());
    for (&x, &y) in batch.outcomes.iter().zip(&batch.controls) {
        post = post.bayes_update(model, x, y)?;
        trajectory.push(optimal_estimate(&post, &setup.f)?);
    }
    let report = *trajectory.last().ok_or(Error::Empty("shot batch"))?;
    Ok(EstimationRun { framework: setup.framework, report, trajectory })
}

/// Coherence quantifier of a coherence-case estimate.
pub fn coherence_of(model: &CoherenceModel, report: &EstimateReport) -> Result<CoherenceQuantifier> {
    model.quantifier(report.estimate, report.error)
}
