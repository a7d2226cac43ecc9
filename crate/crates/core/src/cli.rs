//! The command implementations behind the `carrot-guide` binary.
//!
//! Every output is rendered in memory first and then written atomically, so
//! a failing command never leaves a partial file behind.

use std::path::{Path, PathBuf};

use crate::io::{
    self, parse_config, parse_sweep_spec, parse_waypoints, plot_run, plot_sweep, replicate_figure, write_atomic,
    write_run_metadata, write_sweep_table, write_trajectory, Figure, FigureRun, IoError, Precision, RunRecord,
};
use crate::simulator::run_mission;
use crate::sweep::{run_sweep, SweepCell};

fn precision(full: bool) -> Precision {
    if full {
        Precision::Full
    } else {
        Precision::Significant9
    }
}

/// `foo.csv` -> `foo.meta.json`.
pub fn metadata_path(out: &Path) -> PathBuf {
    out.with_extension("meta.json")
}

pub fn simulate(
    waypoints: &Path,
    config: &Path,
    out: &Path,
    plot: Option<&Path>,
    full_precision: bool,
) -> Result<RunRecord, IoError> {
    let waypoints = parse_waypoints(&io::read_to_string(waypoints)?)?;
    let config = parse_config(&io::read_to_string(config)?)?;
    let run = run_mission(&config, &waypoints.points)?;
    let record = RunRecord::new(config, waypoints.points, run);

    let csv = write_trajectory(&record, precision(full_precision));
    let meta = write_run_metadata(&record);
    let svg = plot.map(|_| plot_run(&record)).transpose()?;

    write_atomic(out, &csv)?;
    write_atomic(&metadata_path(out), &meta)?;
    if let (Some(path), Some(svg)) = (plot, svg) {
        write_atomic(path, &svg)?;
    }
    Ok(record)
}

pub fn sweep(spec: &Path, out: &Path, plot: Option<&Path>, full_precision: bool) -> Result<Vec<SweepCell>, IoError> {
    let spec = parse_sweep_spec(&io::read_to_string(spec)?)?;
    let cells = run_sweep(&spec)?;
    let table = write_sweep_table(&cells, precision(full_precision));
    let svg = plot.map(|_| plot_sweep(&cells)).transpose()?;
    write_atomic(out, &table)?;
    if let (Some(path), Some(svg)) = (plot, svg) {
        write_atomic(path, &svg)?;
    }
    Ok(cells)
}

pub fn replicate(figure: Figure, out_dir: &Path) -> Result<FigureRun, IoError> {
    replicate_figure(figure, out_dir)
}
