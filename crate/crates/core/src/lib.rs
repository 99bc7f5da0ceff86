//! Bayesian global quantum sensing.
//!
//! Ignorance priors and symmetry functions, grid posteriors with optimal
//! estimators for quadratic losses, single-shot optimal measurements from the
//! Bayesian Lyapunov equation, and three worked sensing models (decay rate,
//! coherence under depolarising noise, atomic lifetime).

pub mod error;
pub mod numerics;

pub use error::{Error, Result};
pub mod bayes;
pub mod symmetry;
pub mod strategy;
pub mod models;

/// Crate version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
