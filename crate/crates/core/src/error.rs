use thiserror::Error;

/// Failures raised by the solver, the validators and the diagnostics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("positivity violated: {0}")]
    Positivity(String),
    #[error("Picard iteration did not converge after {iters} sweeps (last change {change:e})")]
    Convergence { iters: usize, change: f64 },
    #[error("singular tridiagonal system: pivot {pivot:e} at row {row}")]
    SingularMatrix { row: usize, pivot: f64 },
    #[error("blow-up at t = {t}: {reason}")]
    BlowUp { t: f64, reason: String },
    #[error("insufficient history: {0}")]
    InsufficientHistory(String),
    #[error("window out of domain: {0}")]
    WindowOutOfDomain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl SimError {
    /// Whether the step controller may recover from this error by shrinking `dt`.
    pub fn is_recoverable(&self) -> bool {
        matches!(
            self,
            SimError::Positivity(_) | SimError::Convergence { .. } | SimError::SingularMatrix { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, SimError>;
