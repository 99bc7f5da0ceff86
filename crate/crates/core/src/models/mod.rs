//! Worked sensing models, shot simulation and case-study pipelines.

pub mod coherence;
pub mod experiment;
pub mod lifetime;
pub mod rate;
pub mod shots;

pub use coherence::{coherence_likelihood, coherence_quantifier, CoherenceModel, CoherenceQuantifier, DEFAULT_LAMBDA};
pub use experiment::{
    coherence_of, estimate_batch, CaseSetup, CoherenceCase, EstimationRun, Framework, LifetimeCase, CASE_NODES,
};
pub use lifetime::{lifetime_likelihood, lifetime_qfi, lifetime_state, LifetimeLikelihood, LifetimeModel};
pub use rate::{rate_closed_form, rate_grid, rate_pipeline, ExponentialRateModel, RATE_GRID_NODES};
pub use shots::{nsr, simulate_shots, ShotBatch};
