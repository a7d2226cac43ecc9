//! Trajectory and sweep CSV tables, plus the JSON run metadata sidecar.

use std::fmt::Write;

use serde::Serialize;

use super::config::config_to_toml;
use super::IoError;
use crate::geometry::{Angle, Point2};
use crate::simulator::{Metrics, MissionRun, SegmentReport, SimConfig, TrajectorySample};
use crate::sweep::SweepCell;

pub const TRAJECTORY_HEADER: &str = "t,x,y,psi,psi_d,e,u,segment";
pub const SWEEP_HEADER: &str =
    "k,delta,k2,label,steps_to_converge,max_abs_e,final_abs_e,integral_abs_e,diverged,segments_completed,error";

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    /// Fixed decimal notation with 9 significant digits.
    #[default]
    Significant9,
    /// Shortest representation that parses back to the same `f64`.
    Full,
}

pub const SIGNIFICANT_DIGITS: usize = 9;

/// Formats `v` in plain decimal notation with `digits` significant digits.
pub fn format_significant(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return format!("{:.*}", digits - 1, 0.0);
    }
    let magnitude = v.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    let text = format!("{v:.decimals$}");
    // Rounding can carry into a new leading digit (9.999… -> 10.00…); one
    // fewer decimal restores the digit count.
    let sig = text.trim_start_matches('-').replace('.', "").trim_start_matches('0').len();
    if sig > digits && decimals > 0 {
        format!("{v:.*}", decimals - 1)
    } else {
        text
    }
}

fn fmt_num(v: f64, precision: Precision) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    match precision {
        Precision::Significant9 => format_significant(v, SIGNIFICANT_DIGITS),
        Precision::Full => format!("{v:?}"),
    }
}

/// Everything needed to reproduce and inspect one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub tool_version: String,
    pub config: SimConfig,
    pub waypoints: Vec<Point2>,
    pub trajectory: Vec<TrajectorySample>,
    pub metrics: Metrics,
    pub segments: Vec<SegmentReport>,
}

impl RunRecord {
    pub fn new(config: SimConfig, waypoints: Vec<Point2>, run: MissionRun) -> Self {
        Self {
            tool_version: TOOL_VERSION.to_string(),
            config,
            waypoints,
            trajectory: run.trajectory,
            metrics: run.metrics,
            segments: run.segments,
        }
    }
}

pub fn write_trajectory(record: &RunRecord, precision: Precision) -> String {
    let mut out = String::with_capacity(64 * (record.trajectory.len() + 1));
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for s in &record.trajectory {
        let fields = [s.t, s.position.x, s.position.y, s.psi.radians(), s.psi_d.radians(), s.e, s.u];
        for v in fields {
            out.push_str(&fmt_num(v, precision));
            out.push(',');
        }
        let _ = writeln!(out, "{}", s.segment_index);
    }
    out
}

/// Reads a trajectory CSV written by [`write_trajectory`].
pub fn parse_trajectory(text: &str) -> Result<Vec<TrajectorySample>, IoError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == TRAJECTORY_HEADER => {}
        _ => return Err(IoError::Parse { line: 1, message: format!("expected header `{TRAJECTORY_HEADER}`") }),
    }
    let mut samples = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 8 {
            return Err(IoError::Parse { line: line_no, message: format!("expected 8 fields, got {}", fields.len()) });
        }
        let num = |i: usize| -> Result<f64, IoError> {
            fields[i]
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| IoError::Parse { line: line_no, message: format!("bad number `{}`", fields[i]) })
        };
        let angle = |i: usize| -> Result<Angle, IoError> {
            Angle::new(num(i)?).map_err(|e| IoError::Parse { line: line_no, message: e.to_string() })
        };
        let segment_index = fields[7]
            .parse()
            .map_err(|_| IoError::Parse { line: line_no, message: format!("bad segment `{}`", fields[7]) })?;
        samples.push(TrajectorySample {
            t: num(0)?,
            position: Point2::new(num(1)?, num(2)?),
            psi: angle(3)?,
            psi_d: angle(4)?,
            e: num(5)?,
            u: num(6)?,
            segment_index,
        });
    }
    Ok(samples)
}

#[derive(Serialize)]
struct RunMetadata<'a> {
    tool_version: &'a str,
    /// Config as a TOML document accepted by `parse_config`.
    config: String,
    waypoints: &'a [Point2],
    samples: usize,
    metrics: &'a Metrics,
    segments: &'a [SegmentReport],
}

pub fn write_run_metadata(record: &RunRecord) -> String {
    let meta = RunMetadata {
        tool_version: &record.tool_version,
        config: config_to_toml(&record.config),
        waypoints: &record.waypoints,
        samples: record.trajectory.len(),
        metrics: &record.metrics,
        segments: &record.segments,
    };
    let mut text = serde_json::to_string_pretty(&meta).expect("metadata serializes");
    text.push('\n');
    text
}

pub fn write_sweep_table(cells: &[SweepCell], precision: Precision) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for cell in cells {
        let p = cell.params;
        let _ = write!(
            out,
            "{},{},{},{},",
            fmt_num(p.k, precision),
            fmt_num(p.delta, precision),
            fmt_num(p.k2, precision),
            cell.label.as_str()
        );
        match &cell.metrics {
            Some(m) => {
                let steps = m.steps_to_converge.map(|s| s.to_string()).unwrap_or_default();
                let _ = write!(
                    out,
                    "{steps},{},{},{},{},{},",
                    fmt_num(m.max_abs_e, precision),
                    fmt_num(m.final_abs_e, precision),
                    fmt_num(m.integral_abs_e, precision),
                    m.diverged,
                    m.segments_completed
                );
            }
            None => out.push_str(",,,,,,"),
        }
        let error = cell.error.as_deref().unwrap_or("").replace(['"', ','], ";");
        let _ = writeln!(out, "{error}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_significant(13.454495211508632, 9), "13.4544952");
        assert_eq!(format_significant(0.05, 9), "0.0500000000");
        assert_eq!(format_significant(-0.8433, 9), "-0.843300000");
        assert_eq!(format_significant(0.0, 9), "0.00000000");
        assert_eq!(format_significant(9.9999999996, 9), "10.0000000");
        assert_eq!(format_significant(123456789012.0, 9), "123456789012");
        assert_eq!(fmt_num(-0.0, Precision::Significant9), "0.00000000");
    }

    fn sample(t: f64) -> TrajectorySample {
        TrajectorySample {
            t,
            position: Point2::new(10.0, 28.0),
            psi: Angle::new(0.9).unwrap(),
            psi_d: Angle::new(-0.8433).unwrap(),
            e: 13.4545,
            u: 1.0,
            segment_index: 0,
        }
    }

    fn record(trajectory: Vec<TrajectorySample>) -> RunRecord {
        RunRecord {
            tool_version: TOOL_VERSION.into(),
            config: SimConfig::default(),
            waypoints: vec![Point2::new(6.0, 12.0), Point2::new(65.0, 35.0)],
            metrics: crate::simulator::compute_metrics(&trajectory, 0.2).unwrap(),
            trajectory,
            segments: vec![],
        }
    }

    #[test]
    fn single_sample_is_two_lines() {
        let text = write_trajectory(&record(vec![sample(0.0)]), Precision::Significant9);
        assert_eq!(text.lines().count(), 2);
        assert_eq!(text.lines().next().unwrap(), TRAJECTORY_HEADER);
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(parse_trajectory("a,b\n").is_err());
        assert!(matches!(
            parse_trajectory(&format!("{TRAJECTORY_HEADER}\n1,2,3\n")),
            Err(IoError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn metadata_embeds_a_parseable_config() {
        let text = write_run_metadata(&record(vec![sample(0.0)]));
        let json: serde_json::Value = serde_json::from_str(&text).unwrap();
        let config = crate::io::parse_config(json["config"].as_str().unwrap()).unwrap();
        assert_eq!(config, SimConfig::default());
        assert_eq!(json["samples"], 1);
    }

    proptest! {
        #[test]
        fn csv_round_trip_within_precision(
            rows in prop::collection::vec((-1e4..1e4f64, -1e4..1e4f64, -3.1..3.1f64, -3.1..3.1f64, -50.0..50.0f64, -5.0..5.0f64), 1..20)
        ) {
            let trajectory: Vec<_> = rows.iter().enumerate().map(|(i, &(x, y, psi, psi_d, e, u))| TrajectorySample {
                t: i as f64 * 0.05,
                position: Point2::new(x, y),
                psi: Angle::new(psi).unwrap(),
                psi_d: Angle::new(psi_d).unwrap(),
                e,
                u,
                segment_index: i / 7,
            }).collect();
            let rec = record(trajectory.clone());

            let full = parse_trajectory(&write_trajectory(&rec, Precision::Full)).unwrap();
            prop_assert_eq!(&full, &trajectory);

            let sig = parse_trajectory(&write_trajectory(&rec, Precision::Significant9)).unwrap();
            let close = |a: f64, b: f64| (a - b).abs() <= 5.0001e-9 * b.abs();
            for (a, b) in sig.iter().zip(&trajectory) {
                prop_assert!(close(a.t, b.t));
                prop_assert!(close(a.position.x, b.position.x));
                prop_assert!(close(a.position.y, b.position.y));
                prop_assert!(close(a.e, b.e));
                prop_assert!(close(a.u, b.u));
                prop_assert_eq!(a.segment_index, b.segment_index);
            }
        }
    }
}
