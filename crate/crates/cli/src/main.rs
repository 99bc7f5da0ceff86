use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qsense::config::{ConfigError, ExperimentConfig};
use qsense::output::write_artifacts;
use qsense::presets::{preset, PRESETS};
use qsense::runner::{run_single, run_sweep, RunError};
use qsense::verify::run_all;

#[derive(Parser)]
#[command(name = "qsense", version, about = "Bayesian global quantum sensing simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate and estimate one configured experiment.
    Run(Source),
    /// Evaluate a configured sweep axis.
    Sweep(Source),
    /// List the named presets.
    Presets,
    /// Run the acceptance checks.
    Verify,
}

#[derive(Args)]
struct Source {
    /// JSON configuration file.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    config: Option<PathBuf>,
    /// Named preset instead of a file.
    #[arg(long)]
    preset: Option<String>,
    /// Output directory; overrides the configuration.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed; overrides the configuration.
    #[arg(long)]
    seed: Option<u64>,
}

impl Source {
    fn load(&self) -> Result<ExperimentConfig, ConfigError> {
        let mut config = match (&self.config, &self.preset) {
            (Some(path), _) => ExperimentConfig::load(path)?,
            (None, Some(name)) => preset(name).ok_or_else(|| ConfigError::UnknownPreset(name.clone()))?,
            (None, None) => unreachable!("clap requires a source"),
        };
        if let Some(out) = &self.out {
            config.output_dir = Some(out.clone());
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        config.validate()?;
        Ok(config)
    }
}

fn execute(source: &Source, sweep: bool) -> Result<(), RunError> {
    let config = source.load()?;
    let artifacts = if sweep { run_sweep(&config)? } else { run_single(&config)? };
    for path in write_artifacts(&artifacts, &config.output_dir())? {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(s) => execute(s, false),
        Command::Sweep(s) => execute(s, true),
        Command::Presets => {
            for p in PRESETS {
                println!("{:<12} {}", p.name, p.description);
            }
            Ok(())
        }
        Command::Verify => {
            let checks = run_all();
            for c in &checks {
                println!("{}", c.line());
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            println!("{} passed, {failed} failed", checks.len() - failed);
            return if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE };
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
