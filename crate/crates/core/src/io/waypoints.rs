//! Waypoint CSV: one `x,y` row per waypoint, optional `x,y` header.

use std::fmt::Write;

use super::IoError;
use crate::geometry::{Point2, DEGENERACY_TOL};

#[derive(Debug, Clone, PartialEq)]
pub struct WaypointFile {
    pub points: Vec<Point2>,
}

impl WaypointFile {
    pub fn new(points: Vec<Point2>) -> Result<Self, IoError> {
        if points.len() < 2 {
            return Err(IoError::TooFewWaypoints(points.len()));
        }
        for (i, pair) in points.windows(2).enumerate() {
            if pair[0].distance(&pair[1]) <= DEGENERACY_TOL {
                return Err(IoError::DuplicateConsecutiveWaypoint { line: i + 2 });
            }
        }
        Ok(Self { points })
    }
}

fn parse_number(field: &str, line: usize) -> Result<f64, IoError> {
    let field = field.trim();
    let looks_numeric =
        !field.is_empty() && field.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'));
    let value = looks_numeric.then(|| field.parse::<f64>().ok()).flatten();
    match value {
        Some(v) if v.is_finite() => Ok(v),
        _ => Err(IoError::Parse { line, message: format!("`{field}` is not a finite decimal number") }),
    }
}

fn is_header(line: &str) -> bool {
    let fields: Vec<_> = line.split(',').map(|f| f.trim().to_ascii_lowercase()).collect();
    fields == ["x", "y"]
}

pub fn parse_waypoints(text: &str) -> Result<WaypointFile, IoError> {
    let mut points = Vec::new();
    let mut lines_of_points = Vec::new();
    let mut seen_content = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if !seen_content {
            seen_content = true;
            if is_header(line) {
                continue;
            }
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 2 {
            return Err(IoError::Parse {
                line: line_no,
                message: format!("expected `x,y`, got {} fields", fields.len()),
            });
        }
        let x = parse_number(fields[0], line_no)?;
        let y = parse_number(fields[1], line_no)?;
        points.push(Point2::new(x, y));
        lines_of_points.push(line_no);
    }
    WaypointFile::new(points).map_err(|err| match err {
        // Report the physical line number of the repeated row.
        IoError::DuplicateConsecutiveWaypoint { line } => {
            IoError::DuplicateConsecutiveWaypoint { line: lines_of_points[line - 1] }
        }
        other => other,
    })
}

/// Shortest round-trip representation, so parsing the output restores the
/// exact same values.
pub fn serialize_waypoints(file: &WaypointFile) -> String {
    let mut out = String::from("x,y\n");
    for p in &file.points {
        let _ = writeln!(out, "{},{}", p.x, p.y);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_reference_waypoints() {
        let f = parse_waypoints("x,y\n6,12\n65,35").unwrap();
        assert_eq!(f.points, vec![Point2::new(6.0, 12.0), Point2::new(65.0, 35.0)]);
    }

    #[test]
    fn header_is_optional_and_whitespace_tolerated() {
        let f = parse_waypoints("  6 , 12 \n\n 65,35.5\n").unwrap();
        assert_eq!(f.points, vec![Point2::new(6.0, 12.0), Point2::new(65.0, 35.5)]);
        let f = parse_waypoints(" X , Y \n0,0\n1,1").unwrap();
        assert_eq!(f.points.len(), 2);
    }

    #[test]
    fn rejects_duplicates_and_short_files() {
        assert!(matches!(parse_waypoints("0,0\n0,0"), Err(IoError::DuplicateConsecutiveWaypoint { line: 2 })));
        assert!(matches!(parse_waypoints("x,y\n1,1\n\n1,1"), Err(IoError::DuplicateConsecutiveWaypoint { line: 4 })));
        assert!(matches!(parse_waypoints("6,12"), Err(IoError::TooFewWaypoints(1))));
        assert!(matches!(parse_waypoints(""), Err(IoError::TooFewWaypoints(0))));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_waypoints("x,y\n1,2\n3;4") {
            Err(IoError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_waypoints("1,2\n3,4,5"), Err(IoError::Parse { line: 2, .. })));
        assert!(matches!(parse_waypoints("1,2\nnan,4"), Err(IoError::Parse { line: 2, .. })));
        assert!(matches!(parse_waypoints("1,2\ninf,4"), Err(IoError::Parse { line: 2, .. })));
        // A decimal comma splits into three fields.
        assert!(matches!(parse_waypoints("1,5,2\n3,4"), Err(IoError::Parse { line: 1, .. })));
    }

    proptest! {
        #[test]
        fn serialize_then_parse_is_identity(raw in prop::collection::vec((-1e6..1e6f64, -1e6..1e6f64), 2..20)) {
            let points: Vec<_> = raw.into_iter().map(|(x, y)| Point2::new(x, y)).collect();
            prop_assume!(points.windows(2).all(|w| w[0].distance(&w[1]) > 1e-6));
            let file = WaypointFile::new(points).unwrap();
            let back = parse_waypoints(&serialize_waypoints(&file)).unwrap();
            prop_assert_eq!(back, file);
        }
    }
}
