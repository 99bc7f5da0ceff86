//! Experiment configuration, parsed from JSON.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use qsense_core::models::{Framework, CASE_NODES, DEFAULT_LAMBDA, RATE_GRID_NODES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Case {
    Rate,
    Coherence,
    Lifetime,
}

impl Case {
    pub fn name(self) -> &'static str {
        match self {
            Case::Rate => "rate",
            Case::Coherence => "coherence",
            Case::Lifetime => "lifetime",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameworkChoice {
    Transformation,
    Geometry,
    Both,
}

impl FrameworkChoice {
    pub fn frameworks(self) -> Vec<Framework> {
        match self {
            FrameworkChoice::Transformation => vec![Framework::Transformation],
            FrameworkChoice::Geometry => vec![Framework::Geometry],
            FrameworkChoice::Both => Framework::BOTH.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// `a` for coherence, `b` for lifetime.
    PriorWidth,
    /// Excited-state weight of the lifetime probe.
    Eta,
    /// Number of shots per repetition.
    Shots,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub case: Case,
    #[serde(default = "default_framework")]
    pub framework: FrameworkChoice,
    /// `a` in `(1/2, 1)` for coherence, `b > 1` for lifetime; unused for rate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior_width: Option<f64>,
    /// `theta` for coherence and rate, `theta / t` for lifetime.
    pub true_parameter: f64,
    pub shots: usize,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default)]
    pub seed: u64,
    /// Hypothesis-grid nodes; defaults depend on the case.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_nodes: Option<usize>,
    /// Depolarising strength of the coherence model.
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    /// Probe time of the lifetime model.
    #[serde(default = "default_probe_time")]
    pub probe_time: f64,
    /// Write the per-shot trajectory table.
    #[serde(default = "default_true")]
    pub trajectory: bool,
    /// Write SVG quick-look plots.
    #[serde(default)]
    pub plots: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
}

fn default_framework() -> FrameworkChoice {
    FrameworkChoice::Both
}

fn default_repetitions() -> usize {
    1
}

fn default_lambda() -> f64 {
    DEFAULT_LAMBDA
}

fn default_probe_time() -> f64 {
    1.0
}

fn default_true() -> bool {
    true
}

/// Default `a` and `b`.
pub const DEFAULT_COHERENCE_WIDTH: f64 = 1.0 - 1e-5;
pub const DEFAULT_LIFETIME_WIDTH: f64 = 10.0;

/// One field-level problem in a configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid configuration:\n{}", .0.iter().map(|e| format!("  {e}")).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<FieldError>),
    #[error("unknown preset {0:?}; run `qsense presets` for the list")]
    UnknownPreset(String),
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.into(), source })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }

    pub fn width(&self) -> f64 {
        match self.case {
            Case::Coherence => self.prior_width.unwrap_or(DEFAULT_COHERENCE_WIDTH),
            Case::Lifetime => self.prior_width.unwrap_or(DEFAULT_LIFETIME_WIDTH),
            Case::Rate => f64::NAN,
        }
    }

    pub fn nodes(&self) -> usize {
        self.grid_nodes.unwrap_or(match self.case {
            Case::Rate => RATE_GRID_NODES,
            _ => CASE_NODES,
        })
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output_dir.clone().unwrap_or_else(|| PathBuf::from("qsense-out").join(self.case.name()))
    }

    /// All field-level problems at once.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut errors = Vec::new();
        let mut bad = |field: &str, message: String| errors.push(FieldError { field: field.into(), message });

        if self.shots == 0 {
            bad("shots", "must be at least 1".into());
        }
        if self.repetitions == 0 {
            bad("repetitions", "must be at least 1".into());
        }
        if let Some(n) = self.grid_nodes {
            if n < 16 {
                bad("grid_nodes", format!("must be at least 16, got {n}"));
            }
        }
        if !self.true_parameter.is_finite() {
            bad("true_parameter", "must be finite".into());
        }
        match self.case {
            Case::Rate => {
                if self.prior_width.is_some() {
                    bad("prior_width", "rate grids follow the data; remove this field".into());
                }
                if !(self.true_parameter > 0.0) {
                    bad("true_parameter", format!("rate must be positive, got {}", self.true_parameter));
                }
            }
            Case::Coherence => {
                let a = self.width();
                if !(a > 0.5 && a < 1.0) {
                    bad("prior_width", format!("a must lie in (0.5, 1), got {a}"));
                } else if !(self.true_parameter > 1.0 - a && self.true_parameter < a) {
                    bad("true_parameter", format!("theta must lie in (1 - a, a) = ({}, {a})", 1.0 - a));
                }
                if !(0.0..=1.0).contains(&self.lambda) {
                    bad("lambda", format!("must lie in [0, 1], got {}", self.lambda));
                }
            }
            Case::Lifetime => {
                let b = self.width();
                if !(b > 1.0 && b.is_finite()) {
                    bad("prior_width", format!("b must exceed 1, got {b}"));
                } else if !(self.true_parameter > 1.0 / b && self.true_parameter < b) {
                    bad("true_parameter", format!("theta / t must lie in (1/b, b) = ({}, {b})", 1.0 / b));
                }
                if !(self.probe_time > 0.0 && self.probe_time.is_finite()) {
                    bad("probe_time", format!("must be positive, got {}", self.probe_time));
                }
            }
        }
        if let Some(sweep) = &self.sweep {
            if sweep.values.len() < 2 {
                bad("sweep.values", "a sweep needs at least 2 points".into());
            }
            let all = |p: &dyn Fn(f64) -> bool| sweep.values.iter().all(|&v| p(v));
            match (sweep.axis, self.case) {
                (SweepAxis::PriorWidth, Case::Coherence) => {
                    if !all(&|a| a > 0.5 && a < 1.0) {
                        bad("sweep.values", "every a must lie in (0.5, 1)".into());
                    }
                }
                (SweepAxis::PriorWidth, Case::Lifetime) => {
                    if !all(&|b| b > 1.0 && b.is_finite()) {
                        bad("sweep.values", "every b must exceed 1".into());
                    }
                }
                (SweepAxis::PriorWidth, Case::Rate) => {
                    bad("sweep.axis", "rate has no prior width".into());
                }
                (SweepAxis::Eta, Case::Lifetime) => {
                    if !all(&|e| (0.0..=1.0).contains(&e)) {
                        bad("sweep.values", "every eta must lie in [0, 1]".into());
                    }
                    if self.framework != FrameworkChoice::Transformation {
                        bad(
                            "framework",
                            "eta sweeps compare gains of one fixed loss; the geometric loss changes with eta, \
                             use \"transformation\""
                                .into(),
                        );
                    }
                }
                (SweepAxis::Eta, _) => bad("sweep.axis", "eta sweeps apply to the lifetime case only".into()),
                (SweepAxis::Shots, _) => {
                    if !all(&|m| m >= 1.0 && m.fract() == 0.0) {
                        bad("sweep.values", "every shot count must be a positive integer".into());
                    }
                }
            }
        }

        if errors.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::Invalid(errors))
        }
    }
}
