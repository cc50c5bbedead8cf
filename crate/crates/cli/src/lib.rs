//! Command-line front end for `radgas`: configuration files, run, sweep and
//! verify pipelines, and their output files.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod commands;
pub mod config;
pub mod output;

pub use commands::{run_command, sweep_command, verify_command};

/// Failure of a command, carrying its process exit code.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("I/O error: {0}")]
    Io(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical blow-up: {0}")]
    BlowUp(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::BlowUp(_) => 3,
            CliError::Verification(_) => 4,
        }
    }
}

impl From<radgas::SimError> for CliError {
    fn from(e: radgas::SimError) -> Self {
        use radgas::SimError as E;
        match e {
            E::Config(_) | E::Domain(_) | E::Precondition(_) | E::WindowOutOfDomain(_) | E::InsufficientHistory(_) => {
                CliError::Config(e.to_string())
            }
            E::BlowUp { .. } | E::Positivity(_) | E::Convergence { .. } | E::SingularMatrix { .. } => {
                CliError::BlowUp(e.to_string())
            }
        }
    }
}

/// Worker count: `requested`, capped by `RADGAS_THREADS` when it is set.
pub fn worker_count(requested: usize) -> usize {
    let cap = std::env::var("RADGAS_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0);
    requested.max(1).min(cap.unwrap_or(usize::MAX))
}

pub(crate) fn pool(threads: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Io(format!("cannot start workers: {e}")))
}
