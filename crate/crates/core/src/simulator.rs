//! Closed-loop simulation: geometry, guidance and vehicle step, repeated.
//!
//! A run over a single segment follows the infinite LOS line until the
//! cross-track error drops to `e_stop`. A mission strings segments together,
//! switching to the next segment when the vehicle overruns the current one
//! along-track or enters the capture radius of its end waypoint; the last
//! segment of a mission behaves like a single-segment run.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{self, Angle, CrossTrackGeometry, GeometryError, Point2};
use crate::guidance::{self, ControlLaw, ControlOutput, GuidanceError, GuidanceParams};
use crate::vehicle::{step_kinematic, step_reference, Integrator, VehicleState};

/// |e| must exceed this multiple of `max(|e₀|, 1 m)` to count as divergence.
pub const DIVERGENCE_FACTOR: f64 = 10.0;
/// The error must also have grown over this many samples.
pub const DIVERGENCE_WINDOW: usize = 100;

pub const DEFAULT_MAX_STEPS: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("trajectory is empty")]
    EmptyTrajectory,
    #[error("a mission needs at least two waypoints, got {0}")]
    TooFewWaypoints(usize),
}

impl From<GuidanceError> for SimError {
    fn from(err: GuidanceError) -> Self {
        SimError::Config(err.to_string())
    }
}

/// How the segment geometry is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeometryMode {
    /// Two-argument arctangent, signed cross-track error.
    #[default]
    Signed,
    /// The quadrant-folded `|atan(dy/dx)|` form of the original listing.
    Listing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub guidance: GuidanceParams,
    pub v_a: f64,
    pub dt: f64,
    pub integrator: Integrator,
    pub geometry: GeometryMode,
    pub e_stop: f64,
    /// Segment switching radius; `None` means `2·delta`.
    pub capture_radius: Option<f64>,
    pub max_steps: usize,
    pub initial_position: Point2,
    pub initial_heading: Angle,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            guidance: GuidanceParams::default(),
            v_a: 25.0,
            dt: 0.05,
            integrator: Integrator::Kinematic,
            geometry: GeometryMode::Signed,
            e_stop: 0.2,
            capture_radius: None,
            max_steps: DEFAULT_MAX_STEPS,
            initial_position: Point2::new(10.0, 28.0),
            initial_heading: Angle::new(0.9).expect("finite"),
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        self.guidance.validate()?;
        let bad = |msg: &str| Err(SimError::Config(msg.to_string()));
        if !(self.v_a > 0.0 && self.v_a.is_finite()) {
            return bad("v_a must be > 0");
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad("dt must be > 0");
        }
        if !(self.e_stop > 0.0 && self.e_stop.is_finite()) {
            return bad("e_stop must be > 0");
        }
        if let Some(r) = self.capture_radius {
            if !(r > 0.0 && r.is_finite()) {
                return bad("capture_radius must be > 0");
            }
        }
        if self.max_steps < 1 {
            return bad("max_steps must be >= 1");
        }
        if !self.initial_position.is_finite() {
            return bad("initial position must be finite");
        }
        Ok(())
    }

    pub fn capture_radius(&self) -> f64 {
        self.capture_radius.unwrap_or(2.0 * self.guidance.delta)
    }

    pub fn initial_state(&self) -> VehicleState {
        VehicleState::new(self.initial_position, self.initial_heading, self.v_a)
    }

    /// Gain of the first-order heading dynamics in kinematic mode.
    pub fn heading_gain(&self) -> f64 {
        match self.guidance.law {
            ControlLaw::P => self.guidance.k,
            ControlLaw::PCte => self.guidance.k1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub position: Point2,
    pub psi: Angle,
    pub psi_d: Angle,
    pub e: f64,
    pub u: f64,
    pub segment_index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub steps_to_converge: Option<usize>,
    pub max_abs_e: f64,
    pub final_abs_e: f64,
    pub integral_abs_e: f64,
    pub diverged: bool,
    pub segments_completed: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Converged,
    Handoff,
    Diverged,
    MaxSteps,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentRun {
    pub trajectory: Vec<TrajectorySample>,
    pub final_state: VehicleState,
    pub metrics: Metrics,
    pub termination: Termination,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SegmentReport {
    pub index: usize,
    pub termination: Termination,
    /// `None` when the segment was switched away from before any sample.
    pub metrics: Option<Metrics>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MissionRun {
    pub trajectory: Vec<TrajectorySample>,
    pub final_state: VehicleState,
    pub metrics: Metrics,
    pub segments: Vec<SegmentReport>,
}

/// Everything the loop needs from one evaluation of the segment geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuidanceSolution {
    pub geometry: CrossTrackGeometry,
    pub target: Point2,
    pub psi_d: Angle,
}

/// Cross-track decomposition, virtual target and desired heading for `p`.
pub fn solve_guidance(
    mode: GeometryMode,
    p: Point2,
    w_i: Point2,
    w_next: Point2,
    delta: f64,
) -> Result<GuidanceSolution, GeometryError> {
    let geometry = match mode {
        GeometryMode::Signed => geometry::cross_track(p, w_i, w_next)?,
        GeometryMode::Listing => geometry::listing::cross_track(p, w_i, w_next)?,
    };
    let target = geometry::virtual_target(w_i, geometry.theta, geometry.r_along, delta);
    let psi_d = match mode {
        GeometryMode::Signed => geometry::desired_heading(p, target)?,
        GeometryMode::Listing => geometry::listing::desired_heading(p, target)?,
    };
    Ok(GuidanceSolution { geometry, target, psi_d })
}

/// Divergence test at the newest entry of a segment's `|e|` history.
pub fn diverged(abs_e: &[f64]) -> bool {
    let Some((&last, _)) = abs_e.split_last() else {
        return false;
    };
    let k = abs_e.len() - 1;
    if k < DIVERGENCE_WINDOW {
        return false;
    }
    let threshold = DIVERGENCE_FACTOR * abs_e[0].max(1.0);
    last > threshold && last > abs_e[k - DIVERGENCE_WINDOW]
}

#[derive(Debug, Clone, Copy)]
struct SegmentRules {
    index: usize,
    handoff: bool,
    stop_on_converge: bool,
}

fn follow_segment(
    config: &SimConfig,
    mut state: VehicleState,
    w_i: Point2,
    w_next: Point2,
    rules: SegmentRules,
    steps_taken: &mut usize,
    out: &mut Vec<TrajectorySample>,
) -> Result<(VehicleState, Termination), SimError> {
    let segment_length = w_i.distance(&w_next);
    let capture = config.capture_radius();
    let mut history: Vec<f64> = Vec::new();

    loop {
        let sol = solve_guidance(config.geometry, state.position, w_i, w_next, config.guidance.delta)?;
        let e = sol.geometry.e;

        if rules.handoff && (sol.geometry.r_along >= segment_length || state.position.distance(&w_next) <= capture) {
            return Ok((state, Termination::Handoff));
        }

        let ControlOutput { u, .. } = guidance::command(sol.psi_d, state.psi, e, state.v_a, &config.guidance);
        out.push(TrajectorySample {
            t: state.t,
            position: state.position,
            psi: state.psi,
            psi_d: sol.psi_d,
            e,
            u,
            segment_index: rules.index,
        });
        history.push(e.abs());

        if rules.stop_on_converge && e.abs() <= config.e_stop {
            return Ok((state, Termination::Converged));
        }
        if diverged(&history) {
            return Ok((state, Termination::Diverged));
        }
        if *steps_taken >= config.max_steps {
            return Ok((state, Termination::MaxSteps));
        }

        state = match config.integrator {
            Integrator::Kinematic => step_kinematic(&state, sol.psi_d, config.heading_gain(), config.dt),
            Integrator::Reference => step_reference(&state, sol.psi_d, u, config.dt),
        };
        *steps_taken += 1;
    }
}

fn check_state(state: &VehicleState) -> Result<(), SimError> {
    if !(state.v_a > 0.0 && state.v_a.is_finite()) {
        return Err(SimError::Config("vehicle speed must be > 0".into()));
    }
    if !state.position.is_finite() || !state.t.is_finite() {
        return Err(SimError::Config("vehicle state must be finite".into()));
    }
    Ok(())
}

/// Follows the infinite line through `w_i` and `w_next` from `state`.
pub fn run_segment(
    config: &SimConfig,
    state: VehicleState,
    w_i: Point2,
    w_next: Point2,
) -> Result<SegmentRun, SimError> {
    config.validate()?;
    check_state(&state)?;
    geometry::los_angle(w_i, w_next)?;

    let mut trajectory = Vec::new();
    let mut steps = 0;
    let rules = SegmentRules { index: 0, handoff: false, stop_on_converge: true };
    let (final_state, termination) = follow_segment(config, state, w_i, w_next, rules, &mut steps, &mut trajectory)?;
    let metrics = compute_metrics(&trajectory, config.e_stop)?;
    Ok(SegmentRun { trajectory, final_state, metrics, termination })
}

/// Runs every segment of `waypoints` in order, starting from the configured
/// initial state.
pub fn run_mission(config: &SimConfig, waypoints: &[Point2]) -> Result<MissionRun, SimError> {
    run_mission_from(config, config.initial_state(), waypoints)
}

pub fn run_mission_from(config: &SimConfig, start: VehicleState, waypoints: &[Point2]) -> Result<MissionRun, SimError> {
    config.validate()?;
    check_state(&start)?;
    if waypoints.len() < 2 {
        return Err(SimError::TooFewWaypoints(waypoints.len()));
    }
    for pair in waypoints.windows(2) {
        geometry::los_angle(pair[0], pair[1])?;
    }

    let n_segments = waypoints.len() - 1;
    let mut trajectory = Vec::new();
    let mut segments = Vec::with_capacity(n_segments);
    let mut state = start;
    let mut steps = 0;

    for (index, pair) in waypoints.windows(2).enumerate() {
        let last = index + 1 == n_segments;
        let rules = SegmentRules { index, handoff: !last, stop_on_converge: last };
        let first_sample = trajectory.len();
        let (next_state, termination) =
            follow_segment(config, state, pair[0], pair[1], rules, &mut steps, &mut trajectory)?;
        state = next_state;
        let slice = &trajectory[first_sample..];
        let metrics = if slice.is_empty() { None } else { Some(compute_metrics(slice, config.e_stop)?) };
        segments.push(SegmentReport { index, termination, metrics });
        if termination != Termination::Handoff {
            break;
        }
    }

    let metrics = compute_metrics(&trajectory, config.e_stop)?;
    Ok(MissionRun { trajectory, final_state: state, metrics, segments })
}

/// Summarizes a trajectory.
///
/// `steps_to_converge` is the sample index from which `|e| <= e_stop` holds
/// through the end of the run, within the final segment. The error integral
/// uses the trapezoidal rule over sample times.
pub fn compute_metrics(trajectory: &[TrajectorySample], e_stop: f64) -> Result<Metrics, SimError> {
    let last = trajectory.last().ok_or(SimError::EmptyTrajectory)?;

    let mut diverged_flag = false;
    let mut history = Vec::new();
    let mut current_segment = trajectory[0].segment_index;
    let mut segments_seen = 1;
    for sample in trajectory {
        if sample.segment_index != current_segment {
            current_segment = sample.segment_index;
            segments_seen += 1;
            history.clear();
        }
        history.push(sample.e.abs());
        diverged_flag |= diverged(&history);
    }

    let tail_start = trajectory
        .iter()
        .rposition(|s| s.e.abs() > e_stop || s.segment_index != last.segment_index)
        .map_or(0, |i| i + 1);
    let steps_to_converge = (tail_start < trajectory.len() && !diverged_flag).then_some(tail_start);

    let max_abs_e = trajectory.iter().map(|s| s.e.abs()).fold(0.0, f64::max);
    let integral_abs_e = trajectory.windows(2).map(|w| 0.5 * (w[0].e.abs() + w[1].e.abs()) * (w[1].t - w[0].t)).sum();

    Ok(Metrics {
        steps_to_converge,
        max_abs_e,
        final_abs_e: last.e.abs(),
        integral_abs_e,
        diverged: diverged_flag,
        segments_completed: segments_seen - 1 + usize::from(steps_to_converge.is_some()),
    })
}
