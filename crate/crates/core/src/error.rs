use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("failed to parse {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("schema violation in field `{field}`: {message}")]
    Schema { field: String, message: String },

    #[error("invariant violated for `{field}`: {message}")]
    Invariant { field: String, message: String },

    #[error("limit surface is undefined for a zero wrench")]
    ZeroWrench,

    #[error("no contact: the prediction carries no pose")]
    NoContact,

    #[error("physics fault: {0}")]
    Physics(#[from] PhysicsFault),

    #[error("nothing to export: record list is empty")]
    EmptyRecords,

    #[error("CSV error on {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("thread pool: {0}")]
    ThreadPool(String),
}

/// Penetration resolution failed to converge within its iteration cap.
#[derive(Debug, Clone, PartialEq, Error, serde::Serialize, serde::Deserialize)]
#[error("penetration {residual_mm:.4} mm left after {iterations} iterations at pusher ({pusher_y:.3}, {pusher_z:.3})")]
pub struct PhysicsFault {
    pub iterations: usize,
    pub residual_mm: f64,
    pub pusher_y: f64,
    pub pusher_z: f64,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invariant(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Invariant {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
