//! Writes a trajectory CSV, its metadata sidecar and an SVG plot.
//!
//! ```bash
//! cargo run --example export_svg -- /tmp/carrot
//! ```

use std::path::PathBuf;

use carrot_guide::geometry::Point2;
use carrot_guide::io::{plot_run, write_atomic, write_run_metadata, write_trajectory, Precision, RunRecord};
use carrot_guide::simulator::{run_mission, SimConfig};

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "carrot-out".into()));
    std::fs::create_dir_all(&dir).unwrap();

    let config = SimConfig::default();
    let waypoints = vec![Point2::new(6.0, 12.0), Point2::new(65.0, 35.0), Point2::new(120.0, 10.0)];
    let run = run_mission(&config, &waypoints).unwrap();
    let record = RunRecord::new(config, waypoints, run);

    write_atomic(&dir.join("run.csv"), &write_trajectory(&record, Precision::Significant9)).unwrap();
    write_atomic(&dir.join("run.meta.json"), &write_run_metadata(&record)).unwrap();
    write_atomic(&dir.join("run.svg"), &plot_run(&record).unwrap()).unwrap();
    println!("wrote {} samples to {}", record.trajectory.len(), dir.display());
}
