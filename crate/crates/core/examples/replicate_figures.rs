//! Reruns the three reference scenarios and writes CSV, SVG and metadata
//! for each.

use std::path::PathBuf;

use carrot_guide::io::{replicate_figure, Figure};

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "figures".into()));
    for figure in Figure::ALL {
        let run = replicate_figure(figure, &dir).unwrap();
        let m = &run.record.metrics;
        println!(
            "figure {}: {} samples, diverged = {}, steps = {:?} -> {}",
            figure.number(),
            run.record.trajectory.len(),
            m.diverged,
            m.steps_to_converge,
            run.svg.display()
        );
    }
}
