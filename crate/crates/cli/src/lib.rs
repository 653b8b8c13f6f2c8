//! Batch experiments over random spherical polytopes.
//!
//! Each experiment sweeps a list of intensities `m` with a fixed number of
//! seeded trials, writes one CSV row per trial to `records.csv` and per-`m`
//! statistics plus log-log power fits to `summary.csv`.

pub mod config;
pub mod experiments;
pub mod fit;
pub mod record;
pub mod run;

pub use config::{Constants, ExperimentConfig, ExperimentKind};
pub use fit::{fit_exponent, fit_log_log, Aggregate, PowerFit};
pub use record::ExperimentRecord;
pub use run::{execute, run, RunOutcome};

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] spherepoly::Error),
    #[error("config error: {0}")]
    Config(String),
    #[error("a power fit needs at least 3 distinct m values, got {0}")]
    InsufficientData(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
