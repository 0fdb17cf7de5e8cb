use std::io;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("a manifold needs at least one atom")]
    NoAtoms,

    #[error("manifold ({n_atoms} atoms, {quanta} quanta) exceeds the configured limit ({max_atoms} atoms, {max_quanta} quanta)")]
    ManifoldTooLarge {
        n_atoms: usize,
        quanta: usize,
        max_atoms: usize,
        max_quanta: usize,
    },

    #[error("manifolds are not adjacent: {0}")]
    ManifoldMismatch(String),

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("outside the analytic oracle's domain: {0}")]
    OracleDomain(String),

    #[error("activity threshold {0} is outside (0, 1)")]
    InvalidThreshold(f64),

    #[error("invalid physical parameters: {0}")]
    InvalidPhysical(String),

    /// The eigensolver gave up; the offending block is kept for inspection.
    #[error("eigensolver did not converge on a {}x{} block", .matrix.nrows(), .matrix.ncols())]
    NonConvergence { matrix: DMatrix<Complex64> },

    #[error("metric {metric} gave non-finite or out-of-range value {value} at cell (x={ix}, y={iy})")]
    BadCell {
        metric: String,
        ix: usize,
        iy: usize,
        value: f64,
    },

    #[error("invalid axis: {0}")]
    InvalidAxis(String),

    #[error("unknown metric `{0}`")]
    UnknownMetric(String),

    #[error("unsupported figure {0} (expected 2-7)")]
    UnsupportedFigure(u32),

    #[error("config error at {location}: {message}")]
    Config { location: String, message: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub fn config(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            location: location.into(),
            message: message.into(),
        }
    }

    /// Process exit code: 2 for configuration/IO problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonConvergence { .. } | Error::BadCell { .. } => 3,
            _ => 2,
        }
    }
}
