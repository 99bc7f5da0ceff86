//! Grid posteriors and optimal estimators for quadratic losses.

pub mod estimate;
pub mod likelihood;
pub mod posterior;

pub use estimate::{optimal_estimate, EstimateReport};
pub use likelihood::{total_probability, LikelihoodModel, OutcomeSpace};
pub use posterior::{evidence, ln_evidence, PosteriorState};
