//! Decomposes one vehicle position against a segment and places the carrot.

use carrot_guide::geometry::{cross_track, desired_heading, virtual_target, Point2};

fn main() {
    let w_i = Point2::new(6.0, 12.0);
    let w_next = Point2::new(65.0, 35.0);
    let p = Point2::new(10.0, 28.0);
    let delta = 5.0;

    let g = cross_track(p, w_i, w_next).unwrap();
    println!("theta   = {:.6} rad", g.theta.radians());
    println!("theta_u = {:.6} rad", g.theta_u.radians());
    println!("r_u     = {:.4} m", g.r_u);
    println!("r_along = {:.4} m", g.r_along);
    println!("e       = {:.4} m (positive: left of the path)", g.e);

    let s = virtual_target(w_i, g.theta, g.r_along, delta);
    let psi_d = desired_heading(p, s).unwrap();
    println!("carrot  = {s}");
    println!("psi_d   = {:.4} rad", psi_d.radians());

    // Sweeping the lookahead moves the carrot along the path and flattens
    // the commanded approach angle.
    for delta in [1.0, 5.0, 20.0, 80.0] {
        let s = virtual_target(w_i, g.theta, g.r_along, delta);
        println!("delta = {delta:>5}: psi_d = {:+.4}", desired_heading(p, s).unwrap().radians());
    }
}
