//! A shallow 30° path with the vehicle far off track. With the heading
//! snapped to the carrot, the plain P law lets the lateral speed run away
//! while the cross-track term pulls the vehicle in.

use carrot_guide::geometry::{Angle, Point2};
use carrot_guide::guidance::{ControlLaw, GuidanceParams, Saturation};
use carrot_guide::simulator::{run_mission, GeometryMode, SimConfig};
use carrot_guide::vehicle::Integrator;

fn main() {
    let w_i = Point2::new(0.0, 0.0);
    let w_next = Point2::new(100.0 * 30f64.to_radians().cos(), 100.0 * 30f64.to_radians().sin());
    let base = SimConfig {
        integrator: Integrator::Reference,
        geometry: GeometryMode::Listing,
        initial_position: Point2::new(10.0, 30.0),
        initial_heading: Angle::ZERO,
        ..SimConfig::default()
    };
    let p = GuidanceParams { k: 3.5, k1: 3.5, law: ControlLaw::P, ..GuidanceParams::default() };
    let p_cte = GuidanceParams { k1: 0.5, k2: 35.0, law: ControlLaw::PCte, ..GuidanceParams::default() };
    for guidance in [p, p_cte] {
        let law = guidance.law;
        let config = SimConfig { guidance: GuidanceParams { saturation: Saturation::UpperOnly, ..guidance }, ..base };
        let run = run_mission(&config, &[w_i, w_next]).unwrap();
        let m = run.metrics;
        println!(
            "{law:?}: diverged = {}, steps = {:?}, samples = {}, final |e| = {:.3}",
            m.diverged,
            m.steps_to_converge,
            run.trajectory.len(),
            m.final_abs_e
        );
    }
}
