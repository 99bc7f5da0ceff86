//! Single-shot optimal quantum strategies from the Bayesian Lyapunov equation.

pub mod adaptive;
pub mod lyapunov;
pub mod model;
pub mod optimal;

pub use adaptive::{adaptive_loop, best_control, optimize_probe, optimize_probe_checked, AdaptiveStep, ProbeOptimum};
pub use lyapunov::{lyapunov_residual, qfi, sld, solve_lyapunov, QuantumFisher};
pub use model::{BornLikelihood, Povm, QuantumModel};
pub use optimal::{consistency_check, optimal_strategy, state_moment, state_moments, StrategyReport};
