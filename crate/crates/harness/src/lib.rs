//! Experiment runner and verification driver for layered subspace codes.
//!
//! The `lsc` binary is a thin command-line layer over this library: every
//! verb maps to one `run_*` function here, so tests drive exactly the code
//! paths the binary uses.

pub mod config;
pub mod dump;
pub mod records;
pub mod scenario;
pub mod search;
pub mod simulate;
pub mod trial;
pub mod verify;

use lsc_core::{ChannelError, CodeError, LayeredError, LinalgError};
use thiserror::Error;

pub use config::{Algorithm, ConfigError, ExperimentConfig, Scenario, SearchTarget};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NOT_FOUND: i32 = 3;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{suite}: enumeration of {size} items exceeds the cap of {cap}")]
    Capacity { suite: String, size: u128, cap: u128 },
    #[error("fixture line {line}: {message}")]
    Fixture { line: usize, message: String },
    #[error(transparent)]
    Layered(#[from] LayeredError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

/// A worker pool with `workers` threads (the rayon default when `None`).
pub fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool, HarnessError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| HarnessError::Pool(e.to_string()))
}
