//! Planar geometry for carrot-chasing guidance.
//!
//! Everything here is a pure function of its inputs: the line-of-sight angle
//! of a segment, the along-track / cross-track decomposition of the vehicle
//! position, the virtual target point (the "carrot") and the heading towards
//! it.
//!
//! Angles use the two-argument arctangent and are normalized to `(-π, π]`.
//! Cross-track error is signed, positive when the vehicle is to the left of
//! the directed line `w_i -> w_next`.
//!
//! The [`listing`] submodule holds the quadrant-folded variant used when
//! replicating the original MATLAB-style loop bit for bit.

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Two points closer than this are treated as coincident (meters).
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Cross-track errors smaller than this are snapped to exactly zero.
pub const ON_LINE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("degenerate segment: waypoints {0} and {1} coincide")]
    DegenerateSegment(Point2, Point2),
    #[error("degenerate target: vehicle at {0} coincides with the virtual target")]
    DegenerateTarget(Point2),
    #[error("non-finite input: {0}")]
    NonFiniteInput(&'static str),
}

/// A position in the plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(&self, other: &Point2) -> f64 {
        (other.x - self.x).hypot(other.y - self.y)
    }

    pub fn translate(&self, dx: f64, dy: f64) -> Point2 {
        Point2::new(self.x + dx, self.y + dy)
    }

    /// Rotates about the origin by `phi` radians.
    pub fn rotate(&self, phi: f64) -> Point2 {
        let (s, c) = phi.sin_cos();
        Point2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// An angle in radians, always normalized to `(-π, π]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize)]
#[serde(transparent)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);

    /// Wraps `radians` into `(-π, π]`.
    pub fn new(radians: f64) -> Result<Angle, GeometryError> {
        wrap_angle(radians)
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn cos(self) -> f64 {
        self.0.cos()
    }

    pub fn sin(self) -> f64 {
        self.0.sin()
    }

    /// Shortest signed arc from `other` to `self`, i.e. `wrap(self - other)`.
    pub fn diff(self, other: Angle) -> Angle {
        Angle(wrap_finite(self.0 - other.0))
    }

    /// Adds `delta` radians and re-normalizes.
    pub fn offset(self, delta: f64) -> Angle {
        Angle(wrap_finite(self.0 + delta))
    }
}

impl std::ops::Neg for Angle {
    type Output = Angle;

    fn neg(self) -> Angle {
        Angle(wrap_finite(-self.0))
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = f64::deserialize(deserializer)?;
        Angle::new(raw).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} rad", self.0)
    }
}

/// Normalizes an angle to `(-π, π]`.
pub fn wrap_angle(a: f64) -> Result<Angle, GeometryError> {
    if !a.is_finite() {
        return Err(GeometryError::NonFiniteInput("angle"));
    }
    Ok(Angle(wrap_finite(a)))
}

fn wrap_finite(a: f64) -> f64 {
    if a > -PI && a <= PI {
        return a;
    }
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Per-step solution of the cross-track geometry for one segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossTrackGeometry {
    /// Distance from `w_i` to the vehicle.
    pub r_u: f64,
    /// Line-of-sight angle of the segment.
    pub theta: Angle,
    /// Angle of the vector `p - w_i`.
    pub theta_u: Angle,
    /// `theta - theta_u`, wrapped.
    pub beta: Angle,
    /// Signed along-track distance of the projection of `p`, measured from `w_i`.
    pub r_along: f64,
    /// Signed cross-track error, positive left of the directed line.
    pub e: f64,
}

fn check_finite(points: &[Point2]) -> Result<(), GeometryError> {
    if points.iter().all(Point2::is_finite) {
        Ok(())
    } else {
        Err(GeometryError::NonFiniteInput("point"))
    }
}

fn segment_direction(w_i: Point2, w_next: Point2) -> Result<(f64, f64, f64), GeometryError> {
    check_finite(&[w_i, w_next])?;
    let dx = w_next.x - w_i.x;
    let dy = w_next.y - w_i.y;
    let len = dx.hypot(dy);
    if len <= DEGENERACY_TOL {
        return Err(GeometryError::DegenerateSegment(w_i, w_next));
    }
    Ok((dx, dy, len))
}

/// Line-of-sight angle of the directed segment `w_i -> w_next`.
pub fn los_angle(w_i: Point2, w_next: Point2) -> Result<Angle, GeometryError> {
    let (dx, dy, _) = segment_direction(w_i, w_next)?;
    Ok(Angle(wrap_finite(dy.atan2(dx))))
}

/// Decomposes the vehicle position relative to the segment.
///
/// `e` and `r_along` come from projecting `p - w_i` onto the unit LOS
/// direction; `theta_u` and `beta` are carried along for cross-checking
/// against the angular form `e = r_u·sin(beta)`.
pub fn cross_track(p: Point2, w_i: Point2, w_next: Point2) -> Result<CrossTrackGeometry, GeometryError> {
    check_finite(&[p])?;
    let (dx, dy, len) = segment_direction(w_i, w_next)?;
    let (ux, uy) = (dx / len, dy / len);
    let rx = p.x - w_i.x;
    let ry = p.y - w_i.y;

    let r_u = rx.hypot(ry);
    let r_along = rx * ux + ry * uy;
    let mut e = ux * ry - uy * rx;
    if e.abs() <= ON_LINE_TOL {
        e = 0.0;
    }

    let theta = Angle(wrap_finite(dy.atan2(dx)));
    let theta_u = if r_u > 0.0 { Angle(wrap_finite(ry.atan2(rx))) } else { theta };
    let beta = theta.diff(theta_u);

    Ok(CrossTrackGeometry { r_u, theta, theta_u, beta, r_along, e })
}

/// The virtual target point: `delta` meters ahead of the vehicle's
/// projection onto the LOS line, anchored at `w_i`.
pub fn virtual_target(w_i: Point2, theta: Angle, r_along: f64, delta: f64) -> Point2 {
    let reach = r_along + delta;
    Point2::new(w_i.x + reach * theta.cos(), w_i.y + reach * theta.sin())
}

/// Heading from `p` towards the target `s`.
pub fn desired_heading(p: Point2, s: Point2) -> Result<Angle, GeometryError> {
    check_finite(&[p, s])?;
    let dx = s.x - p.x;
    let dy = s.y - p.y;
    if dx.hypot(dy) <= DEGENERACY_TOL {
        return Err(GeometryError::DegenerateTarget(p));
    }
    Ok(Angle(wrap_finite(dy.atan2(dx))))
}

/// Reflects `p` across the infinite line through `w_i` and `w_next`.
pub fn reflect_across(p: Point2, w_i: Point2, w_next: Point2) -> Result<Point2, GeometryError> {
    let (dx, dy, len) = segment_direction(w_i, w_next)?;
    let (ux, uy) = (dx / len, dy / len);
    let rx = p.x - w_i.x;
    let ry = p.y - w_i.y;
    let along = rx * ux + ry * uy;
    let (fx, fy) = (along * ux, along * uy);
    Ok(Point2::new(w_i.x + 2.0 * fx - rx, w_i.y + 2.0 * fy - ry))
}

/// Quadrant-folded geometry of the original code listing.
///
/// Every angle is `|atan(dy/dx)|`, so all of them land in `[0, π/2]`, and the
/// cross-track error is the unsigned `r_u·sin|θ - θ_u|`. This is only correct
/// for segments pointing into the first quadrant with the vehicle in front of
/// `w_i`, which is exactly why it exists: figure replication needs its
/// failure modes as well as its successes.
pub mod listing {
    use super::*;

    fn folded_atan(dy: f64, dx: f64) -> f64 {
        (dy / dx).atan().abs()
    }

    pub fn los_angle(w_i: Point2, w_next: Point2) -> Result<Angle, GeometryError> {
        let (dx, dy, _) = segment_direction(w_i, w_next)?;
        Ok(Angle(folded_atan(dy, dx)))
    }

    pub fn cross_track(p: Point2, w_i: Point2, w_next: Point2) -> Result<CrossTrackGeometry, GeometryError> {
        check_finite(&[p])?;
        let (dx, dy, _) = segment_direction(w_i, w_next)?;
        let theta = folded_atan(dy, dx);
        let rx = p.x - w_i.x;
        let ry = p.y - w_i.y;
        let r_u = ry.hypot(rx);
        let theta_u = if r_u > 0.0 { folded_atan(ry, rx) } else { theta };
        let beta = (theta - theta_u).abs();
        Ok(CrossTrackGeometry {
            r_u,
            theta: Angle(theta),
            theta_u: Angle(theta_u),
            beta: Angle(beta),
            r_along: r_u * beta.cos(),
            e: r_u * beta.sin(),
        })
    }

    pub fn desired_heading(p: Point2, s: Point2) -> Result<Angle, GeometryError> {
        check_finite(&[p, s])?;
        let dx = s.x - p.x;
        let dy = s.y - p.y;
        if dx.hypot(dy) <= DEGENERACY_TOL {
            return Err(GeometryError::DegenerateTarget(p));
        }
        Ok(Angle(folded_atan(dy, dx)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const REF_WI: Point2 = Point2::new(6.0, 12.0);
    const REF_WN: Point2 = Point2::new(65.0, 35.0);
    const REF_P0: Point2 = Point2::new(10.0, 28.0);

    #[test]
    fn los_angle_examples() {
        let theta = los_angle(REF_WI, REF_WN).unwrap();
        assert_relative_eq!(theta.radians(), 23f64.atan2(59.0), max_relative = 1e-15);
        assert_relative_eq!(theta.radians(), 0.371709, epsilon = 1e-6);

        let o = Point2::new(0.0, 0.0);
        assert_eq!(los_angle(o, Point2::new(1.0, 0.0)).unwrap().radians(), 0.0);
        assert_eq!(los_angle(o, Point2::new(0.0, 1.0)).unwrap().radians(), PI / 2.0);
    }

    #[test]
    fn los_angle_rejects_coincident_waypoints() {
        let p = Point2::new(3.0, 4.0);
        let q = Point2::new(3.0 + 1e-10, 4.0);
        assert!(matches!(los_angle(p, q), Err(GeometryError::DegenerateSegment(..))));
        assert!(matches!(cross_track(p, p, q), Err(GeometryError::DegenerateSegment(..))));
    }

    #[test]
    fn cross_track_reference_initial_condition() {
        let g = cross_track(REF_P0, REF_WI, REF_WN).unwrap();
        // Oracle: e = (P - W_i) x d_hat, r_along = (P - W_i) . d_hat with d = (59, 23).
        let len = (59.0f64 * 59.0 + 23.0 * 23.0).sqrt();
        let oracle_e = (59.0 * 16.0 - 23.0 * 4.0) / len;
        let oracle_along = (59.0 * 4.0 + 23.0 * 16.0) / len;
        assert_relative_eq!(g.r_u, 272f64.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(g.r_u, 16.4924, epsilon = 1e-4);
        assert_relative_eq!(g.r_along, oracle_along, max_relative = 1e-12);
        assert_relative_eq!(g.r_along, 9.538, epsilon = 2e-3);
        assert_relative_eq!(g.e, oracle_e, max_relative = 1e-12);
        assert_relative_eq!(g.e, 13.4545, epsilon = 1e-4);
        assert!(g.e > 0.0, "P0 lies left of the directed LOS");
    }

    #[test]
    fn cross_track_trivial_cases() {
        let o = Point2::new(0.0, 0.0);
        let end = Point2::new(10.0, 0.0);

        let g = cross_track(Point2::new(5.0, 0.0), o, end).unwrap();
        assert_eq!((g.e, g.r_along, g.r_u), (0.0, 5.0, 5.0));

        let g = cross_track(Point2::new(0.0, 1.0), o, end).unwrap();
        assert_eq!((g.e, g.r_along, g.r_u), (1.0, 0.0, 1.0));

        let g = cross_track(Point2::new(0.0, -1.0), o, end).unwrap();
        assert_eq!(g.e, -1.0);
    }

    #[test]
    fn cross_track_snaps_on_line_points() {
        let g = cross_track(Point2::new(3.0, 3.0), Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)).unwrap();
        assert_eq!(g.e, 0.0);
    }

    #[test]
    fn cross_track_at_waypoint() {
        let g = cross_track(REF_WI, REF_WI, REF_WN).unwrap();
        assert_eq!((g.r_u, g.r_along, g.e), (0.0, 0.0, 0.0));
        assert_eq!(g.beta.radians(), 0.0);
    }

    #[test]
    fn virtual_target_examples() {
        let g = cross_track(REF_P0, REF_WI, REF_WN).unwrap();
        let s = virtual_target(REF_WI, g.theta, g.r_along, 5.0);
        let reach = g.r_along + 5.0;
        assert_relative_eq!(s.x, 6.0 + reach * g.theta.cos(), max_relative = 1e-15);
        assert_relative_eq!(s.x, 19.54, epsilon = 1e-2);
        assert_relative_eq!(s.y, 17.28, epsilon = 1e-2);

        let s = virtual_target(Point2::new(0.0, 0.0), Angle::ZERO, 0.0, 5.0);
        assert_eq!(s, Point2::new(5.0, 0.0));

        let s = virtual_target(Point2::new(0.0, 0.0), Angle::new(PI / 2.0).unwrap(), 3.0, 2.0);
        assert!(s.x.abs() < 1e-15);
        assert_eq!(s.y, 5.0);
    }

    #[test]
    fn desired_heading_examples() {
        let g = cross_track(REF_P0, REF_WI, REF_WN).unwrap();
        let s = virtual_target(REF_WI, g.theta, g.r_along, 5.0);
        let psi_d = desired_heading(REF_P0, s).unwrap();
        assert_relative_eq!(psi_d.radians(), (s.y - 28.0).atan2(s.x - 10.0), max_relative = 1e-15);
        assert_relative_eq!(psi_d.radians(), -0.8433, epsilon = 1e-4);

        let o = Point2::new(0.0, 0.0);
        assert_relative_eq!(desired_heading(o, Point2::new(1.0, 1.0)).unwrap().radians(), PI / 4.0);
        assert_eq!(desired_heading(Point2::new(1.0, 0.0), o).unwrap().radians(), PI);
        assert!(matches!(desired_heading(o, o), Err(GeometryError::DegenerateTarget(_))));
    }

    #[test]
    fn wrap_angle_examples() {
        assert_eq!(wrap_angle(0.0).unwrap().radians(), 0.0);
        assert_relative_eq!(wrap_angle(1.5 * PI).unwrap().radians(), -PI / 2.0, epsilon = 1e-15);
        assert_eq!(wrap_angle(-PI).unwrap().radians(), PI);
        assert_eq!(wrap_angle(PI).unwrap().radians(), PI);
        assert!(matches!(wrap_angle(f64::NAN), Err(GeometryError::NonFiniteInput(_))));
        assert!(matches!(wrap_angle(f64::INFINITY), Err(GeometryError::NonFiniteInput(_))));
    }

    #[test]
    fn non_finite_points_are_rejected() {
        let bad = Point2::new(f64::NAN, 0.0);
        let o = Point2::new(0.0, 0.0);
        let e = Point2::new(1.0, 0.0);
        assert!(matches!(cross_track(bad, o, e), Err(GeometryError::NonFiniteInput(_))));
        assert!(matches!(los_angle(o, bad), Err(GeometryError::NonFiniteInput(_))));
        assert!(matches!(desired_heading(bad, e), Err(GeometryError::NonFiniteInput(_))));
    }

    #[test]
    fn listing_geometry_matches_reference_initial_values() {
        let g = listing::cross_track(REF_P0, REF_WI, REF_WN).unwrap();
        // Straight transcription of the listing's opening block.
        let ru = ((12.0f64 - 28.0).powi(2) + (6.0f64 - 10.0).powi(2)).sqrt();
        let theta = ((35.0f64 - 12.0) / (65.0 - 6.0)).atan().abs();
        let theta_u = ((28.0f64 - 12.0) / (10.0 - 6.0)).atan().abs();
        let beta = (theta - theta_u).abs();
        assert_relative_eq!(g.r_u, ru, max_relative = 1e-15);
        assert_relative_eq!(g.theta.radians(), theta, max_relative = 1e-15);
        assert_relative_eq!(g.r_along, ru * beta.cos(), max_relative = 1e-15);
        assert_relative_eq!(g.e, ru * beta.sin(), max_relative = 1e-15);
    }

    #[test]
    fn listing_heading_folds_quadrant() {
        let psi = listing::desired_heading(REF_P0, Point2::new(19.54, 17.28)).unwrap();
        assert!(psi.radians() > 0.0, "listing heading loses the downward sign");
        assert_relative_eq!(psi.radians(), 0.8433, epsilon = 1e-3);
    }

    #[test]
    fn reflection_flips_cross_track_sign() {
        let p = Point2::new(3.0, 7.0);
        let m = reflect_across(p, REF_WI, REF_WN).unwrap();
        let a = cross_track(p, REF_WI, REF_WN).unwrap();
        let b = cross_track(m, REF_WI, REF_WN).unwrap();
        assert_relative_eq!(a.e, -b.e, max_relative = 1e-12);
        assert_relative_eq!(a.r_along, b.r_along, max_relative = 1e-12);
    }

    fn coord() -> impl Strategy<Value = f64> {
        -1000.0..1000.0f64
    }

    fn point() -> impl Strategy<Value = Point2> {
        (coord(), coord()).prop_map(|(x, y)| Point2::new(x, y))
    }

    fn segment() -> impl Strategy<Value = (Point2, Point2)> {
        (point(), point()).prop_filter("distinct", |(a, b)| a.distance(b) > 1e-3)
    }

    fn close(a: f64, b: f64, rel: f64, abs: f64) -> bool {
        (a - b).abs() <= abs.max(rel * a.abs().max(b.abs()))
    }

    proptest! {
        #[test]
        fn pythagorean_decomposition(p in point(), (wi, wn) in segment()) {
            let g = cross_track(p, wi, wn).unwrap();
            prop_assert!(g.r_u >= 0.0);
            prop_assert!(close(g.r_along.powi(2) + g.e.powi(2), g.r_u.powi(2), 1e-9, 1e-18));
        }

        #[test]
        fn vtp_lies_on_the_line(p in point(), (wi, wn) in segment(), delta in 0.1..50.0f64) {
            let g = cross_track(p, wi, wn).unwrap();
            let s = virtual_target(wi, g.theta, g.r_along, delta);
            let gs = cross_track(s, wi, wn).unwrap();
            prop_assert!(gs.e.abs() < 1e-9 * (1.0 + gs.r_u), "e = {}", gs.e);
        }

        #[test]
        fn translation_invariance(p in point(), (wi, wn) in segment(), tx in coord(), ty in coord()) {
            let a = cross_track(p, wi, wn).unwrap();
            let b = cross_track(p.translate(tx, ty), wi.translate(tx, ty), wn.translate(tx, ty)).unwrap();
            let scale = 1e-9 * (1.0 + a.r_u + tx.abs() + ty.abs());
            prop_assert!(close(a.r_u, b.r_u, 1e-9, scale));
            prop_assert!(close(a.r_along, b.r_along, 1e-9, scale));
            prop_assert!(close(a.e, b.e, 1e-9, scale));
        }

        #[test]
        fn rotation_invariance(p in point(), (wi, wn) in segment(), phi in -PI..PI) {
            let a = cross_track(p, wi, wn).unwrap();
            let b = cross_track(p.rotate(phi), wi.rotate(phi), wn.rotate(phi)).unwrap();
            let scale = 1e-9 * (1.0 + p.distance(&Point2::default()) + wi.distance(&Point2::default()));
            prop_assert!(close(a.r_u, b.r_u, 1e-9, scale));
            prop_assert!(close(a.r_along, b.r_along, 1e-9, scale));
            prop_assert!(close(a.e, b.e, 1e-9, scale));
            let shift = b.theta.diff(a.theta.offset(phi)).radians();
            prop_assert!(shift.abs() < 1e-9);
        }

        #[test]
        fn reversed_segment_los(( wi, wn) in segment()) {
            let fwd = los_angle(wi, wn).unwrap();
            let back = los_angle(wn, wi).unwrap().offset(PI);
            prop_assert!(fwd.diff(back).radians().abs() < 1e-12);
        }

        #[test]
        fn vector_and_angular_forms_agree(p in point(), (wi, wn) in segment()) {
            let g = cross_track(p, wi, wn).unwrap();
            let angular = g.r_u * g.beta.sin().abs();
            prop_assert!(close(g.e.abs(), angular, 1e-9, 1e-9));
        }

        #[test]
        fn wrap_is_total_and_congruent(a in -1e6..1e6f64) {
            let w = wrap_angle(a).unwrap().radians();
            prop_assert!(w > -PI && w <= PI);
            let k = ((a - w) / TAU).round();
            prop_assert!((a - w - k * TAU).abs() < 1e-9 * (1.0 + a.abs()));
        }
    }
}
