use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid area {width} x {height}: both sides must be positive and finite")]
    InvalidArea { width: f64, height: f64 },

    #[error("noOfLocations must be at least 2, got {0}")]
    TooFewLocations(usize),

    #[error("point ({x}, {y}) lies outside the movement area")]
    PointOutsideArea { x: f64, y: f64 },

    #[error("time {t} is outside the current phase interval [{start}, {end}]")]
    TimeOutsidePhase { t: f64, start: f64, end: f64 },

    #[error("invalid value for `{key}`: {reason}")]
    InvalidValue { key: String, reason: String },

    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),

    #[error("missing required configuration key `{0}`")]
    MissingKey(String),

    #[error("{path}:{line}: {reason}")]
    Syntax {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("malformed locations file {path}: {reason}")]
    LocationsFormat { path: PathBuf, reason: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(key: &str, reason: impl Into<String>) -> Self {
        Error::InvalidValue {
            key: key.to_string(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
