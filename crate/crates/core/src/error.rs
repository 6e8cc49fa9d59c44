use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid planform: {0}")]
    InvalidPlanform(String),

    #[error("invalid kinematics: {0}")]
    InvalidKinematics(String),

    #[error("too few samples for a {harmonics}-harmonic fit: got {got}, need at least {need}")]
    TooFewSamples { harmonics: usize, got: usize, need: usize },

    #[error("rank-deficient Fourier design matrix (condition estimate {condition:.3e}); samples do not cover enough distinct phases")]
    RankDeficient { condition: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("induced velocity did not converge after {iterations} iterations (last residual {residual:.3e} m/s)")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error(
        "target lift {target:.6e} N is not bracketed by [{lift_lo:.6e}, {lift_hi:.6e}] N over the frequency bounds"
    )]
    NotBracketed { target: f64, lift_lo: f64, lift_hi: f64 },

    #[error("closed-loop simulation diverged at step {step}")]
    Diverged { step: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error on {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
