use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the simulator's library operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("beta must be finite and satisfy |beta| < 1, got {0}")]
    Superluminal(f64),

    #[error("direction flag must be +1 or -1, got {0}")]
    InvalidDirection(i64),

    #[error("unknown polarization tag {0:?} (expected \"H\" or \"V\")")]
    InvalidPolarization(String),

    #[error("invalid axis: {0}")]
    InvalidAxis(String),

    #[error("sample count {values} does not match axis count {axis}")]
    LengthMismatch { axis: usize, values: usize },

    #[error("incompatible functions: {0}")]
    Incompatible(String),

    #[error("expected {expected} representation, got {found}")]
    WrongRepresentation {
        expected: &'static str,
        found: &'static str,
    },

    #[error("resample scale must be finite and non-zero, got {0}")]
    ZeroScale(f64),

    #[error("coordinate {coordinate} lies outside the grid [{start}, {end}]")]
    OutOfGrid { coordinate: f64, start: f64, end: f64 },

    #[error("no channel with direction {s} and polarization {lambda}")]
    MissingChannel { s: i8, lambda: &'static str },

    #[error("duplicate channel with direction {s} and polarization {lambda}")]
    DuplicateChannel { s: i8, lambda: &'static str },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty wavenumber window [{lo}, {hi}]")]
    EmptyWindow { lo: f64, hi: f64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: malformed sample file: {reason}")]
    MalformedSamples { path: PathBuf, reason: String },

    #[error("{source_name}: invalid configuration: {}", problems.join("; "))]
    InvalidConfig {
        source_name: String,
        problems: Vec<String>,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
