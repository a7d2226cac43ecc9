//! A three-waypoint mission with a right-angle corner. The vehicle hands
//! over to the next segment when it overruns the current one or gets within
//! the capture radius of its end waypoint.

use carrot_guide::geometry::{Angle, Point2};
use carrot_guide::simulator::{run_mission, SimConfig};

fn main() {
    let waypoints = [Point2::new(0.0, 0.0), Point2::new(200.0, 0.0), Point2::new(200.0, 200.0)];
    let config =
        SimConfig { initial_position: Point2::new(0.0, -20.0), initial_heading: Angle::ZERO, ..SimConfig::default() };
    let run = run_mission(&config, &waypoints).unwrap();

    for seg in &run.segments {
        println!("segment {}: {:?}", seg.index, seg.termination);
    }
    let corner_overshoot =
        run.trajectory.iter().filter(|s| s.segment_index == 1).map(|s| s.position.x - 200.0).fold(0.0, f64::max);
    println!("overshoot past x = 200: {corner_overshoot:.3} m");
    println!(
        "{} samples, t_end = {:.2} s, segments completed: {}",
        run.trajectory.len(),
        run.final_state.t,
        run.metrics.segments_completed
    );
}
