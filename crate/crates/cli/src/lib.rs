//! Batch driver: configuration, experiment runs, manifests and plot scripts.

pub mod config;
pub mod plot;
pub mod run;

use std::path::PathBuf;

pub use config::{ExperimentConfig, Format, Kind, RawConfig};
pub use plot::emit_plots;
pub use run::{config_hash, manifest_name, run, RunManifest, RunOutcome};

pub const WORKERS_ENV: &str = "SUMPROD_LAB_WORKERS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] sumprod_core::Error),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("no result files in {0}")]
    MissingResults(PathBuf),
}

/// Exit status: `0` success, `1` invariant violation, `2` configuration or
/// input error.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VIOLATION: i32 = 1;
    pub const CONFIG: i32 = 2;
}

/// Sizes the global thread pool from [`WORKERS_ENV`] when it is set.
pub fn init_workers() -> Result<(), CliError> {
    let Ok(v) = std::env::var(WORKERS_ENV) else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("{WORKERS_ENV} must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}
