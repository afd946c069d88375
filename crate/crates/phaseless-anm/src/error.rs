use thiserror::Error;

/// Errors shared across the signal, measurement, solver, and recovery layers.
#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("infeasible instance configuration: {0}")]
    InfeasibleInstance(String),

    #[error("rejection sampling exhausted after {0} attempts")]
    SamplingExhausted(usize),

    #[error("invalid measurement set: {0}")]
    InvalidMeasurement(String),

    #[error("inconsistent magnitudes: {0}")]
    InconsistentMagnitudes(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("solver did not reach optimality: {0}")]
    SolverFailure(String),

    #[error("matrix is not rank-1 (eigenvalue ratio {ratio:.3e} > {threshold:.3e})")]
    NotRankOne { ratio: f64, threshold: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("degenerate pencil: {0}")]
    DegeneratePencil(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("lapack routine {routine} failed with info = {info}")]
    Lapack { routine: &'static str, info: i32 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
