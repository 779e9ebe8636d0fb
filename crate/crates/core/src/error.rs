use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate grid: {0}")]
    DegenerateGrid(String),

    #[error("non-finite value encountered at t = {t}")]
    NonFinite { t: f64 },

    #[error("radius {radius} is outside the grid [0, {outer}]")]
    OutsideGrid { radius: f64, outer: f64 },

    #[error("unknown multiplier preset `{0}`")]
    UnknownPreset(String),

    #[error("unknown density `{0}`")]
    UnknownDensity(String),

    #[error("cone average window too short: T = {window} but observation spacing is {spacing}")]
    WindowTooShort { window: f64, spacing: f64 },

    #[error("non-uniform observation spacing ({first} vs {second})")]
    NonUniformSpacing { first: f64, second: f64 },

    #[error("initial data {path}: {message}")]
    InitialData { path: PathBuf, message: String },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
