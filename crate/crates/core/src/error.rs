use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the solver, the oracles and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("field is not real-valued: mode {mode} violates Hermitian symmetry by {defect:e}")]
    Symmetry { mode: i64, defect: f64 },

    #[error("zero mode must vanish (|mean| = {mean:e}); use the mean-shifting pipeline")]
    MeanViolation { mean: f64 },

    #[error("grid mismatch: {left} vs {right}")]
    GridMismatch { left: String, right: String },

    #[error("non-finite state detected after step {step} (t = {time})")]
    Divergence { step: usize, time: f64 },

    #[error("accuracy target {target:e} not reached: {detail}")]
    Accuracy { target: f64, detail: String },

    #[error("slope fit failed: {0}")]
    Fit(String),

    /// Configuration problem; `line` 0 stands for the command line.
    #[error("{}: {message}", config_location(*line))]
    Config { line: usize, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn config_location(line: usize) -> String {
    if line == 0 {
        "command line".to_string()
    } else {
        format!("line {line}")
    }
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Divergence { .. } | Error::Accuracy { .. } | Error::Fit(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
