//! Sweeps the heading gain K at a fixed lookahead and reports where the
//! kinematic model first diverges. Thread count follows
//! `CARROT_GUIDE_THREADS` if set.
//!
//! ```bash
//! CARROT_GUIDE_THREADS=4 cargo run --release --example gain_sweep
//! ```

use carrot_guide::geometry::Point2;
use carrot_guide::simulator::SimConfig;
use carrot_guide::sweep::{run_sweep, stability_boundary, SweepSpec};

fn main() {
    let spec = SweepSpec {
        base: SimConfig::default(),
        k_values: (1..=60).map(f64::from).collect(),
        delta_values: vec![5.0],
        k2_values: None,
        waypoints: vec![Point2::new(6.0, 12.0), Point2::new(65.0, 35.0)],
        slow_threshold: None,
    };
    let cells = run_sweep(&spec).unwrap();
    for c in cells.iter().filter(|c| (c.params.k as usize).is_multiple_of(5) || c.params.k > 38.0 && c.params.k < 43.0)
    {
        let steps = c.metrics.as_ref().and_then(|m| m.steps_to_converge);
        println!("K = {:>4}: {:<9} steps = {steps:?}", c.params.k, c.label.as_str());
    }
    for (delta, k) in stability_boundary(&cells).unwrap() {
        match k {
            Some(k) => println!("delta = {delta}: first diverging K = {k}"),
            None => println!("delta = {delta}: no divergence in range"),
        }
    }
}
