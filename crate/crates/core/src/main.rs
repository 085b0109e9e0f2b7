use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qdephase::experiment::{self, ExperimentConfig, ExperimentError, Format, PRESETS};

/// Pure-dephasing experiments: decoherence, coherence, non-Markovianity,
/// revivals and GRAPE.
#[derive(Parser)]
#[command(name = "qdephase", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config file.
    Run {
        config: PathBuf,
        /// Output directory, overriding `[output].dir`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named preset.
    Preset {
        name: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        format: OutFormat,
        /// Print the preset's config instead of running it.
        #[arg(long)]
        print_config: bool,
    },
    /// List the available presets.
    ListPresets,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(command: Command) -> Result<(), ExperimentError> {
    match command {
        Command::Run { config, out } => {
            let cfg = ExperimentConfig::from_path(&config)?;
            report(experiment::run_and_write(&cfg, out.as_deref())?);
        }
        Command::Preset { name, out, format, print_config } => {
            let mut cfg = experiment::preset(&name).ok_or_else(|| {
                let names: Vec<&str> = PRESETS.iter().map(|p| p.0).collect();
                ExperimentError::Config(format!("unknown preset `{name}`; available: {}", names.join(", ")))
            })?;
            cfg.output.format = match format {
                OutFormat::Csv => Format::Csv,
                OutFormat::Json => Format::Json,
            };
            if print_config {
                print!("{}", cfg.to_toml());
                return Ok(());
            }
            report(experiment::run_and_write(&cfg, Some(&out))?);
        }
        Command::ListPresets => {
            for (name, about) in PRESETS {
                println!("{name:<8} {about}");
            }
        }
    }
    Ok(())
}

fn report(paths: Vec<PathBuf>) {
    for p in paths {
        println!("{}", p.display());
    }
}
