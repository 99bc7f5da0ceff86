//! Experiment driver for the sensing case studies: configuration, presets,
//! simulation runs, sweeps, artifact emission and the acceptance checks.

pub mod config;
pub mod output;
pub mod presets;
pub mod runner;
pub mod verify;
