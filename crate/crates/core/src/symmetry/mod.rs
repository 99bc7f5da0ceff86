//! Ignorance priors, symmetry functions, induced losses and invariance checks.

pub mod fisher;
pub mod function;
pub mod prior;
pub mod transform;

pub use fisher::{classical_fisher, kl_divergence, FisherInformation};
pub use function::{symmetry_from_prior, SymmetryForm, SymmetryFunction};
pub use prior::{loss_from_prior, make_ignorance_prior, prior_from_fisher_curve, PriorDensity, PriorKind};
pub use transform::{verify_prior_invariance, ParameterTransform, TransformFamily};
