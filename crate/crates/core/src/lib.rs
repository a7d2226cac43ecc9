//! Carrot-chasing path-following guidance for a planar constant-speed vehicle.
//!
//! The crate is layered bottom-up:
//!
//! - [`geometry`]: line-of-sight angle, cross-track error, virtual target point
//! - [`guidance`]: the proportional (`P`) and proportional + cross-track
//!   (`P_CTE`) heading laws with command saturation
//! - [`vehicle`]: one integration step of the vehicle model
//! - [`simulator`]: closed-loop single-segment runs and waypoint missions
//! - [`sweep`]: deterministic parallel gain / lookahead grid sweeps
//! - [`io`]: waypoint / trajectory CSV, TOML configs, SVG plots, figure runs
//! - [`cli`]: the commands behind the `carrot-guide` binary
//!
//! ```
//! use carrot_guide::geometry::Point2;
//! use carrot_guide::simulator::{run_mission, SimConfig};
//!
//! let waypoints = [Point2::new(6.0, 12.0), Point2::new(65.0, 35.0)];
//! let run = run_mission(&SimConfig::default(), &waypoints).unwrap();
//! assert!(run.metrics.steps_to_converge.is_some());
//! ```

pub mod cli;
pub mod geometry;
pub mod guidance;
pub mod io;
pub mod simulator;
pub mod sweep;
pub mod vehicle;

pub use geometry::{Angle, Point2};
pub use guidance::{ControlLaw, GuidanceParams, Saturation};
pub use simulator::{run_mission, run_segment, GeometryMode, Metrics, MissionRun, SimConfig};
pub use sweep::{run_sweep, SweepSpec};
pub use vehicle::{Integrator, VehicleState};
