//! Experiment runner behind the command-line tool: configuration, presets,
//! per-kind drivers and result tables.

mod config;
mod presets;
mod run;
mod table;

use std::path::{Path, PathBuf};

pub use config::{ExperimentConfig, ExperimentSection, Format, Kind, OutputSection, Params, Values};
pub use presets::{preset, PRESETS};
pub use run::run;
pub use table::{ResultTable, TableError};

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Physics(#[from] crate::Error),
    #[error("cannot access {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl ExperimentError {
    /// Process exit code: 2 for configuration, 3 for parameter-domain and
    /// 1 for I/O failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            ExperimentError::Config(_) => 2,
            ExperimentError::Physics(_) => 3,
            ExperimentError::Io { .. } => 1,
        }
    }
}

/// Runs `config` and writes one file per table into `dir` (default: the
/// config's output directory). Returns the written paths.
pub fn run_and_write(config: &ExperimentConfig, dir: Option<&Path>) -> Result<Vec<PathBuf>, ExperimentError> {
    let tables = run(config)?;
    let dir = dir.unwrap_or(&config.output.dir);
    std::fs::create_dir_all(dir).map_err(|source| ExperimentError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let format = config.output.format;
    tables
        .iter()
        .map(|t| {
            let path = dir.join(format!("{}.{}", t.name, format.extension()));
            let text = match format {
                Format::Csv => t.to_csv(),
                Format::Json => t.to_json(),
            };
            std::fs::write(&path, text).map_err(|source| ExperimentError::Io {
                path: path.clone(),
                source,
            })?;
            Ok(path)
        })
        .collect()
}
