//! Named configurations for the worked examples.

use crate::config::{Case, ExperimentConfig, FrameworkChoice, SweepAxis, SweepConfig};

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
}

pub const PRESETS: &[Preset] = &[
    Preset { name: "fig2", description: "coherence: intrinsic gain vs prior width a, both frameworks" },
    Preset { name: "fig3-top", description: "coherence: a = 1 - 1e-5, theta = 0.8, 120 shots, 10 repetitions" },
    Preset { name: "fig3-bottom", description: "coherence: a = 1 - 1e-5, theta = 0.8, 20 shots, 10 repetitions" },
    Preset { name: "fig4", description: "lifetime: intrinsic gain vs prior width b, both frameworks" },
    Preset { name: "fig5-top", description: "lifetime: b = 10, theta/t = 1, 200 shots, 10 repetitions" },
    Preset { name: "fig5-bottom", description: "lifetime: b = 10, theta/t = 0.26, 20 shots, 10 repetitions" },
    Preset { name: "fig6", description: "lifetime: gain vs probe weight eta, b = 10, scale framework" },
    Preset { name: "rate", description: "rate: one waiting time, grid pipeline vs closed form" },
];

fn base(case: Case, true_parameter: f64, shots: usize, repetitions: usize) -> ExperimentConfig {
    ExperimentConfig {
        case,
        framework: FrameworkChoice::Both,
        prior_width: None,
        true_parameter,
        shots,
        repetitions,
        seed: 0,
        grid_nodes: None,
        lambda: qsense_core::models::DEFAULT_LAMBDA,
        probe_time: 1.0,
        trajectory: true,
        plots: false,
        output_dir: None,
        sweep: None,
    }
}

/// Configuration of a named preset.
pub fn preset(name: &str) -> Option<ExperimentConfig> {
    let mut c = match name {
        "fig2" => {
            let mut c = base(Case::Coherence, 0.52, 1, 1);
            c.sweep = Some(SweepConfig { axis: SweepAxis::PriorWidth, values: vec![0.55, 0.65, 0.75, 0.85, 0.95] });
            c
        }
        "fig3-top" => base(Case::Coherence, 0.8, 120, 10),
        "fig3-bottom" => base(Case::Coherence, 0.8, 20, 10),
        "fig4" => {
            let mut c = base(Case::Lifetime, 1.0, 1, 1);
            c.sweep = Some(SweepConfig { axis: SweepAxis::PriorWidth, values: vec![2.0, 5.0, 10.0, 20.0, 50.0, 100.0] });
            c
        }
        "fig5-top" => base(Case::Lifetime, 1.0, 200, 10),
        "fig5-bottom" => base(Case::Lifetime, 0.26, 20, 10),
        "fig6" => {
            let mut c = base(Case::Lifetime, 1.0, 1, 1);
            c.framework = FrameworkChoice::Transformation;
            c.sweep = Some(SweepConfig { axis: SweepAxis::Eta, values: (1..=20).map(|k| k as f64 / 20.0).collect() });
            c
        }
        "rate" => base(Case::Rate, 1.0, 1, 1),
        _ => return None,
    };
    c.output_dir = Some(std::path::PathBuf::from("qsense-out").join(name));
    Some(c)
}
