//! The P + cross-track law on the reference two-waypoint scenario, stepped
//! the way the original loop does it (folded arctangents, heading snapped to
//! the carrot, lateral speed integrating the command).
//!
//! ```bash
//! cargo run --example listing_replay
//! ```

use carrot_guide::io::Figure;

fn main() {
    let record = Figure::CrossTrack.run().expect("scenario runs");
    println!("{:>4} {:>8} {:>9} {:>9} {:>9}", "k", "t", "x", "y", "e");
    for (k, s) in record.trajectory.iter().enumerate() {
        println!("{k:>4} {:>8.3} {:>9.4} {:>9.4} {:>9.4}", s.t, s.position.x, s.position.y, s.e);
    }
    match record.metrics.steps_to_converge {
        Some(n) => println!("|e| <= 0.2 m after {n} steps"),
        None => println!("did not converge"),
    }
}
