use thiserror::Error;

use crate::model::Diagnostic;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("component index {index} out of range (n = {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("speed of component {component} is not positive ({value}) at sample {sample}")]
    NonPositiveSpeed {
        component: usize,
        sample: usize,
        value: f64,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid system: {}", format_diagnostics(.0))]
    InvalidSystem(Vec<Diagnostic>),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("speed ordering violated: {0}")]
    Ordering(String),

    #[error("CFL violation: Courant number {courant} exceeds 1")]
    Cfl { courant: f64 },

    #[error("non-finite state at step {step} (t = {time})")]
    NonFinite { step: usize, time: f64 },

    #[error("conjugate gradient diverged at iteration {iteration}")]
    Divergence { iteration: usize },

    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn format_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
