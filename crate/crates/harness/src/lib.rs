//! Config-driven experiments over the `mstar-core` estimators.
//!
//! A run evaluates every named sequence at every scheduled stage, checks
//! finite-window trend assertions, and writes CSV, JSON lines, SVG plots and a
//! plain-text report.

pub mod config;
pub mod output;
pub mod plot;
pub mod run;
pub mod trend;

use mstar_core::estimator::EstimatorError;
use mstar_core::sequences::SequenceError;
use thiserror::Error;

pub use config::{ConfigError, ExperimentConfig, SuiteKind};
pub use output::{PStarRecord, Record};
pub use run::{run, run_crosscheck, run_suite, SuiteReport};
pub use trend::{Outcome, Point, TrendAssertion, TrendKind};

/// The built-in demo: small enough to finish in seconds.
pub const DEMO_CONFIG: &str = include_str!("../configs/demo.toml");

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Estimator(#[from] EstimatorError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}
