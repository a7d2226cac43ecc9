//! File formats: waypoint CSV, TOML run configuration and sweep specs,
//! trajectory / sweep CSV tables, run metadata and SVG plots.

use std::io::Write;
use std::path::Path;

use thiserror::Error;

pub mod config;
pub mod figures;
pub mod plot;
pub mod trajectory;
pub mod waypoints;

pub use config::{config_to_toml, parse_config, parse_sweep_spec};
pub use figures::{replicate_figure, Figure, FigureRun};
pub use plot::{plot_run, plot_sweep};
pub use trajectory::{parse_trajectory, write_run_metadata, write_sweep_table, write_trajectory, Precision, RunRecord};
pub use waypoints::{parse_waypoints, serialize_waypoints, WaypointFile};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("need at least two waypoints, found {0}")]
    TooFewWaypoints(usize),
    #[error("line {line}: waypoint repeats the previous one")]
    DuplicateConsecutiveWaypoint { line: usize },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("nothing to plot")]
    EmptyData,
    #[error(transparent)]
    Sim(#[from] crate::simulator::SimError),
    #[error(transparent)]
    Sweep(#[from] crate::sweep::SweepError),
    #[error("{path}: {source}")]
    File { path: String, source: std::io::Error },
}

impl IoError {
    pub(crate) fn file(path: &Path, source: std::io::Error) -> Self {
        IoError::File { path: path.display().to_string(), source }
    }
}

/// Writes via a temporary file in the same directory and renames it into
/// place, so `path` is either untouched or complete.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), IoError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| IoError::file(path, e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| IoError::file(path, e))?;
    tmp.flush().map_err(|e| IoError::file(path, e))?;
    tmp.persist(path).map_err(|e| IoError::file(path, e.error))?;
    Ok(())
}

pub fn read_to_string(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|e| IoError::file(path, e))
}
