//! How the lookahead δ trades convergence time for smoothness, under both
//! vehicle models.

use carrot_guide::geometry::Point2;
use carrot_guide::guidance::GuidanceParams;
use carrot_guide::simulator::{run_mission, SimConfig};
use carrot_guide::vehicle::Integrator;

fn main() {
    let waypoints = [Point2::new(6.0, 12.0), Point2::new(65.0, 35.0)];
    for integrator in [Integrator::Kinematic, Integrator::Reference] {
        println!("{integrator:?}");
        for delta in [2.0, 5.0, 10.0, 20.0, 40.0] {
            let config = SimConfig {
                guidance: GuidanceParams { k: 1.0, k1: 1.0, delta, ..GuidanceParams::default() },
                integrator,
                ..SimConfig::default()
            };
            let m = run_mission(&config, &waypoints).unwrap().metrics;
            println!(
                "  delta = {delta:>4}: steps = {:>5}  max |e| = {:>7.3}  ∫|e| = {:>8.3}",
                m.steps_to_converge.map_or("-".into(), |n| n.to_string()),
                m.max_abs_e,
                m.integral_abs_e
            );
        }
    }
}
