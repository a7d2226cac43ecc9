//! The three reference scenarios: a convergent P-law run, a high-gain P-law
//! run that diverges, and the P + cross-track-error law run.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::plot::plot_run_with_title;
use super::trajectory::{write_run_metadata, write_trajectory, Precision, RunRecord};
use super::{write_atomic, IoError};
use crate::geometry::Point2;
use crate::guidance::{ControlLaw, GuidanceParams, Saturation};
use crate::simulator::{run_mission, GeometryMode, SimConfig};
use crate::vehicle::Integrator;

/// Path shared by all three figures.
pub const FIGURE_WAYPOINTS: [Point2; 2] = [Point2::new(6.0, 12.0), Point2::new(65.0, 35.0)];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// P law, K = 1: smooth convergence.
    ConvergentP,
    /// P law, K = 3.5: the error grows without bound.
    DivergentP,
    /// P + cross-track law, K1 = 0.5, K2 = 35.
    CrossTrack,
}

impl Figure {
    pub const ALL: [Figure; 3] = [Figure::ConvergentP, Figure::DivergentP, Figure::CrossTrack];

    pub fn number(self) -> u8 {
        match self {
            Figure::ConvergentP => 2,
            Figure::DivergentP => 3,
            Figure::CrossTrack => 4,
        }
    }

    pub fn from_number(n: u8) -> Option<Figure> {
        Figure::ALL.into_iter().find(|f| f.number() == n)
    }

    pub fn title(self) -> &'static str {
        match self {
            Figure::ConvergentP => "Carrot chasing, P law (K = 1)",
            Figure::DivergentP => "Carrot chasing, P law (K = 3.5)",
            Figure::CrossTrack => "Carrot chasing, P + cross-track law (K1 = 0.5, K2 = 35)",
        }
    }

    pub fn config(self) -> SimConfig {
        let base = SimConfig::default();
        match self {
            Figure::ConvergentP => {
                SimConfig { guidance: GuidanceParams { k: 1.0, k1: 1.0, ..GuidanceParams::default() }, ..base }
            }
            // Both of these use the listing's step: heading snaps to the
            // carrot and only the lateral speed integrates the command.
            Figure::DivergentP => SimConfig {
                guidance: GuidanceParams {
                    k: 3.5,
                    k1: 3.5,
                    saturation: Saturation::UpperOnly,
                    ..GuidanceParams::default()
                },
                integrator: Integrator::Reference,
                geometry: GeometryMode::Listing,
                ..base
            },
            Figure::CrossTrack => SimConfig {
                guidance: GuidanceParams {
                    k1: 0.5,
                    k2: 35.0,
                    law: ControlLaw::PCte,
                    saturation: Saturation::UpperOnly,
                    ..GuidanceParams::default()
                },
                integrator: Integrator::Reference,
                geometry: GeometryMode::Listing,
                ..base
            },
        }
    }

    pub fn run(self) -> Result<RunRecord, IoError> {
        let config = self.config();
        let run = run_mission(&config, &FIGURE_WAYPOINTS)?;
        Ok(RunRecord::new(config, FIGURE_WAYPOINTS.to_vec(), run))
    }
}

impl FromStr for Figure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim()
            .parse::<u8>()
            .ok()
            .and_then(Figure::from_number)
            .ok_or_else(|| format!("unknown figure `{s}` (expected 2, 3 or 4)"))
    }
}

/// Files written for one figure.
#[derive(Debug, Clone)]
pub struct FigureRun {
    pub figure: Figure,
    pub record: RunRecord,
    pub csv: PathBuf,
    pub svg: PathBuf,
    pub metadata: PathBuf,
}

/// Runs `figure` and writes `figure-N.csv`, `figure-N.svg` and
/// `figure-N.meta.json` into `out_dir` (created if missing).
pub fn replicate_figure(figure: Figure, out_dir: &Path) -> Result<FigureRun, IoError> {
    std::fs::create_dir_all(out_dir).map_err(|e| IoError::file(out_dir, e))?;
    let record = figure.run()?;
    let svg_text = plot_run_with_title(&record, Some(figure.title()))?;
    let stem = format!("figure-{}", figure.number());
    let csv = out_dir.join(format!("{stem}.csv"));
    let svg = out_dir.join(format!("{stem}.svg"));
    let metadata = out_dir.join(format!("{stem}.meta.json"));
    write_atomic(&csv, &write_trajectory(&record, Precision::Significant9))?;
    write_atomic(&svg, &svg_text)?;
    write_atomic(&metadata, &write_run_metadata(&record))?;
    Ok(FigureRun { figure, record, csv, svg, metadata })
}
