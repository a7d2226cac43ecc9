//! Static SVG 1.1 figures.
//!
//! A run plot shows the waypoint polyline with diamond markers, every
//! trajectory sample, and the virtual target point of every sample (as a
//! triangle), drawn with one scale for both axes. A sweep plot is a `(K, δ)`
//! grid with one rectangle per cell colored by its label.

use std::collections::BTreeSet;
use std::fmt::Write;

use ordered_float::OrderedFloat;

use super::trajectory::RunRecord;
use super::IoError;
use crate::geometry::Point2;
use crate::guidance::ControlLaw;
use crate::simulator::{solve_guidance, GeometryMode};
use crate::sweep::{CellLabel, SweepCell};
use crate::vehicle::Integrator;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 640.0;
const MARGIN: f64 = 60.0;
const CAPTION_SPACE: f64 = 40.0;

fn header(out: &mut String, title: &str) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, "<title>{}</title>", escape(title));
    let _ = writeln!(out, r##"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>"##);
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// A "nice" tick spacing (1, 2 or 5 × 10ⁿ) giving roughly `target` ticks.
fn tick_step(span: f64, target: f64) -> f64 {
    let raw = span / target;
    let base = 10f64.powf(raw.log10().floor());
    let frac = raw / base;
    let nice = if frac < 1.5 {
        1.0
    } else if frac < 3.5 {
        2.0
    } else if frac < 7.5 {
        5.0
    } else {
        10.0
    };
    nice * base
}

/// World-to-screen mapping with one scale factor for both axes.
struct Frame {
    min_x: f64,
    min_y: f64,
    max_x: f64,
    max_y: f64,
    scale: f64,
    origin_x: f64,
    origin_y: f64,
}

impl Frame {
    fn fit(points: impl Iterator<Item = Point2>) -> Frame {
        let (mut min_x, mut min_y, mut max_x, mut max_y) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
        for p in points {
            min_x = min_x.min(p.x);
            min_y = min_y.min(p.y);
            max_x = max_x.max(p.x);
            max_y = max_y.max(p.y);
        }
        let pad = 0.05 * (max_x - min_x).max(max_y - min_y).max(1.0);
        let (min_x, min_y, max_x, max_y) = (min_x - pad, min_y - pad, max_x + pad, max_y + pad);
        let avail_w = WIDTH - 2.0 * MARGIN;
        let avail_h = HEIGHT - 2.0 * MARGIN - CAPTION_SPACE;
        let scale = (avail_w / (max_x - min_x)).min(avail_h / (max_y - min_y));
        let origin_x = MARGIN + 0.5 * (avail_w - scale * (max_x - min_x));
        let origin_y = MARGIN + avail_h - 0.5 * (avail_h - scale * (max_y - min_y));
        Frame { min_x, min_y, max_x, max_y, scale, origin_x, origin_y }
    }

    fn map(&self, p: Point2) -> (f64, f64) {
        (self.origin_x + (p.x - self.min_x) * self.scale, self.origin_y - (p.y - self.min_y) * self.scale)
    }

    fn axes(&self, out: &mut String) {
        let (x0, y0) = self.map(Point2::new(self.min_x, self.min_y));
        let (x1, y1) = self.map(Point2::new(self.max_x, self.max_y));
        let _ = writeln!(
            out,
            r##"<rect class="axes" x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#444444" stroke-width="1"/>"##,
            x1 - x0,
            y0 - y1
        );
        let step = tick_step((self.max_x - self.min_x).max(self.max_y - self.min_y), 8.0);
        let _ = writeln!(out, r##"<g class="grid" stroke="#dddddd" stroke-width="0.5">"##);
        let mut ticks = String::new();
        let mut v = (self.min_x / step).ceil() * step;
        while v <= self.max_x {
            let (sx, _) = self.map(Point2::new(v, self.min_y));
            let _ = writeln!(out, r#"<line x1="{sx:.2}" y1="{y0:.2}" x2="{sx:.2}" y2="{y1:.2}"/>"#);
            let _ = writeln!(
                ticks,
                r#"<text x="{sx:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"#,
                y0 + 15.0,
                trim_number(v)
            );
            v += step;
        }
        let mut v = (self.min_y / step).ceil() * step;
        while v <= self.max_y {
            let (_, sy) = self.map(Point2::new(self.min_x, v));
            let _ = writeln!(out, r#"<line x1="{x0:.2}" y1="{sy:.2}" x2="{x1:.2}" y2="{sy:.2}"/>"#);
            let _ = writeln!(
                ticks,
                r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"#,
                x0 - 5.0,
                sy + 4.0,
                trim_number(v)
            );
            v += step;
        }
        let _ = writeln!(out, "</g>");
        let _ = write!(out, r#"<g class="ticks" font-family="sans-serif">{ticks}</g>"#);
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" font-family="sans-serif" text-anchor="middle">x (m)</text>"#,
            0.5 * (x0 + x1),
            y0 + 32.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" font-family="sans-serif" text-anchor="middle" transform="rotate(-90 {:.2} {:.2})">y (m)</text>"#,
            x0 - 40.0,
            0.5 * (y0 + y1),
            x0 - 40.0,
            0.5 * (y0 + y1)
        );
    }
}

fn trim_number(v: f64) -> String {
    let v = if v.abs() < 1e-9 { 0.0 } else { v };
    let s = format!("{v:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn caption_for(record: &RunRecord) -> String {
    let c = &record.config;
    let g = &c.guidance;
    let gains = match g.law {
        ControlLaw::P => format!("K = {}", g.k),
        ControlLaw::PCte => format!("K1 = {}, K2 = {}", g.k1, g.k2),
    };
    let integrator = match c.integrator {
        Integrator::Kinematic => "kinematic",
        Integrator::Reference => "reference",
    };
    let geometry = match c.geometry {
        GeometryMode::Signed => "",
        GeometryMode::Listing => ", listing geometry",
    };
    format!("{gains}, δ = {}, v_a = {} m/s, dt = {} s ({integrator}{geometry})", g.delta, c.v_a, c.dt)
}

pub fn plot_run(record: &RunRecord) -> Result<String, IoError> {
    plot_run_with_title(record, None)
}

/// Like [`plot_run`], with an optional title line above the caption.
pub fn plot_run_with_title(record: &RunRecord, title: Option<&str>) -> Result<String, IoError> {
    if record.trajectory.is_empty() || record.waypoints.is_empty() {
        return Err(IoError::EmptyData);
    }
    let delta = record.config.guidance.delta;
    let targets: Vec<Point2> = record
        .trajectory
        .iter()
        .filter_map(|s| {
            let seg = s.segment_index;
            let (w_i, w_n) = (record.waypoints.get(seg)?, record.waypoints.get(seg + 1)?);
            solve_guidance(record.config.geometry, s.position, *w_i, *w_n, delta).ok().map(|sol| sol.target)
        })
        .collect();

    let frame = Frame::fit(
        record
            .waypoints
            .iter()
            .copied()
            .chain(record.trajectory.iter().map(|s| s.position))
            .chain(targets.iter().copied()),
    );

    let caption = caption_for(record);
    let mut out = String::new();
    header(&mut out, title.unwrap_or(&caption));
    frame.axes(&mut out);

    let path: Vec<String> = record
        .waypoints
        .iter()
        .map(|p| {
            let (x, y) = frame.map(*p);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let _ = writeln!(
        out,
        r##"<polyline class="path" points="{}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>"##,
        path.join(" ")
    );
    for p in &record.waypoints {
        let (x, y) = frame.map(*p);
        let r = 6.0;
        let _ = writeln!(
            out,
            r##"<path class="waypoint" d="M {x:.2} {:.2} L {:.2} {y:.2} L {x:.2} {:.2} L {:.2} {y:.2} Z" fill="#1f77b4"/>"##,
            y - r,
            x + r,
            y + r,
            x - r
        );
    }

    if record.trajectory.len() > 1 {
        let track: Vec<String> = record
            .trajectory
            .iter()
            .map(|s| {
                let (x, y) = frame.map(s.position);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            out,
            r##"<polyline class="track" points="{}" fill="none" stroke="#d62728" stroke-width="0.8" stroke-opacity="0.6"/>"##,
            track.join(" ")
        );
    }
    let _ = writeln!(out, r##"<g fill="#d62728">"##);
    for s in &record.trajectory {
        let (x, y) = frame.map(s.position);
        let _ = writeln!(out, r#"<circle class="trajectory-point" cx="{x:.2}" cy="{y:.2}" r="2"/>"#);
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r##"<g fill="none" stroke="#2ca02c" stroke-width="0.8">"##);
    for t in &targets {
        let (x, y) = frame.map(*t);
        let _ = writeln!(
            out,
            r#"<path class="vtp" d="M {x:.2} {:.2} L {:.2} {:.2} L {:.2} {:.2} Z"/>"#,
            y - 3.5,
            x + 3.0,
            y + 2.0,
            x - 3.0,
            y + 2.0
        );
    }
    let _ = writeln!(out, "</g>");

    let m = &record.metrics;
    let outcome = match (m.diverged, m.steps_to_converge) {
        (true, _) => "diverged".to_string(),
        (false, Some(n)) => format!("converged after {n} steps"),
        (false, None) => "not converged".to_string(),
    };
    let mut y = HEIGHT - CAPTION_SPACE + 5.0;
    if let Some(title) = title {
        let _ = writeln!(
            out,
            r#"<text class="title" x="{:.1}" y="{:.1}" font-size="14" font-family="sans-serif" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            MARGIN / 2.0,
            escape(title)
        );
    }
    let _ = writeln!(
        out,
        r#"<text class="caption" x="{:.1}" y="{y:.1}" font-size="13" font-family="sans-serif" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(&caption)
    );
    y += 18.0;
    let _ = writeln!(
        out,
        r#"<text class="caption" x="{:.1}" y="{y:.1}" font-size="12" font-family="sans-serif" text-anchor="middle">{} samples, max |e| = {:.3} m, {}</text>"#,
        WIDTH / 2.0,
        record.trajectory.len(),
        m.max_abs_e,
        outcome
    );
    out.push_str("</svg>\n");
    Ok(out)
}

fn label_color(label: CellLabel) -> &'static str {
    match label {
        CellLabel::Converged => "#2ca02c",
        CellLabel::Slow => "#bcbd22",
        CellLabel::Diverged => "#d62728",
        CellLabel::Timeout => "#ff7f0e",
        CellLabel::Error => "#7f7f7f",
    }
}

/// Columns are distinct K values; rows are distinct `(δ, K₂)` pairs.
pub fn plot_sweep(cells: &[SweepCell]) -> Result<String, IoError> {
    if cells.is_empty() {
        return Err(IoError::EmptyData);
    }
    let ks: BTreeSet<OrderedFloat<f64>> = cells.iter().map(|c| OrderedFloat(c.params.k)).collect();
    let rows: BTreeSet<(OrderedFloat<f64>, OrderedFloat<f64>)> =
        cells.iter().map(|c| (OrderedFloat(c.params.delta), OrderedFloat(c.params.k2))).collect();
    let ks: Vec<_> = ks.into_iter().collect();
    let rows: Vec<_> = rows.into_iter().collect();
    let multi_k2 = rows.iter().map(|r| r.1).collect::<BTreeSet<_>>().len() > 1;

    let left = MARGIN + 40.0;
    let top = MARGIN;
    let grid_w = WIDTH - left - MARGIN;
    let grid_h = HEIGHT - top - MARGIN - CAPTION_SPACE - 20.0;
    let cell_w = grid_w / ks.len() as f64;
    let cell_h = grid_h / rows.len() as f64;

    let mut out = String::new();
    header(&mut out, "Gain / lookahead sweep");
    for c in cells {
        let col = ks.binary_search(&OrderedFloat(c.params.k)).expect("k present");
        let row = rows.binary_search(&(OrderedFloat(c.params.delta), OrderedFloat(c.params.k2))).expect("row present");
        // Smallest delta at the bottom.
        let x = left + col as f64 * cell_w;
        let y = top + (rows.len() - 1 - row) as f64 * cell_h;
        let _ = writeln!(
            out,
            r##"<rect class="cell" data-label="{}" x="{x:.2}" y="{y:.2}" width="{cell_w:.2}" height="{cell_h:.2}" fill="{}" stroke="#ffffff" stroke-width="0.5"><title>K = {}, δ = {}, K2 = {}: {}</title></rect>"##,
            c.label.as_str(),
            label_color(c.label),
            c.params.k,
            c.params.delta,
            c.params.k2,
            c.label.as_str()
        );
    }

    let label_every = (ks.len() / 15).max(1);
    for (i, k) in ks.iter().enumerate().filter(|(i, _)| i % label_every == 0) {
        let x = left + (i as f64 + 0.5) * cell_w;
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{:.2}" font-size="11" font-family="sans-serif" text-anchor="middle">{}</text>"#,
            top + grid_h + 15.0,
            trim_number(k.0)
        );
    }
    for (i, (delta, k2)) in rows.iter().enumerate() {
        let y = top + (rows.len() - 1 - i) as f64 * cell_h + 0.5 * cell_h + 4.0;
        let text = if multi_k2 {
            format!("δ={} K2={}", trim_number(delta.0), trim_number(k2.0))
        } else {
            trim_number(delta.0)
        };
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{y:.2}" font-size="11" font-family="sans-serif" text-anchor="end">{}</text>"#,
            left - 5.0,
            escape(&text)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" font-family="sans-serif" text-anchor="middle">K</text>"#,
        left + grid_w / 2.0,
        top + grid_h + 32.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" font-family="sans-serif" text-anchor="middle">δ (m)</text>"#,
        MARGIN - 20.0,
        top - 10.0
    );

    let legend_y = HEIGHT - CAPTION_SPACE + 5.0;
    let labels = [CellLabel::Converged, CellLabel::Slow, CellLabel::Diverged, CellLabel::Timeout, CellLabel::Error];
    for (i, label) in labels.iter().enumerate() {
        let x = MARGIN + i as f64 * 130.0;
        let _ = writeln!(
            out,
            r#"<rect class="legend" x="{x:.1}" y="{:.1}" width="12" height="12" fill="{}"/>"#,
            legend_y - 10.0,
            label_color(*label)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{legend_y:.1}" font-size="12" font-family="sans-serif">{}</text>"#,
            x + 16.0,
            label.as_str()
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Angle;
    use crate::simulator::{compute_metrics, SimConfig, TrajectorySample};
    use crate::sweep::GridPoint;

    fn record(n: usize) -> RunRecord {
        let trajectory: Vec<_> = (0..n)
            .map(|i| TrajectorySample {
                t: i as f64 * 0.05,
                position: Point2::new(10.0 + i as f64, 28.0 - i as f64),
                psi: Angle::ZERO,
                psi_d: Angle::ZERO,
                e: 1.0,
                u: 0.0,
                segment_index: 0,
            })
            .collect();
        RunRecord {
            tool_version: "test".into(),
            config: SimConfig::default(),
            waypoints: vec![Point2::new(6.0, 12.0), Point2::new(65.0, 35.0)],
            metrics: compute_metrics(&trajectory, 0.2).unwrap(),
            trajectory,
            segments: vec![],
        }
    }

    #[test]
    fn run_plot_counts_markers() {
        let svg = plot_run(&record(7)).unwrap();
        assert_eq!(svg.matches(r#"class="waypoint""#).count(), 2);
        assert_eq!(svg.matches(r#"class="trajectory-point""#).count(), 7);
        assert_eq!(svg.matches(r#"class="vtp""#).count(), 7);
        assert!(svg.contains("K = 0.5, δ = 5"));
        roxmltree::Document::parse(&svg).unwrap();
    }

    #[test]
    fn single_point_plot_is_valid() {
        let svg = plot_run(&record(1)).unwrap();
        assert_eq!(svg.matches(r#"class="trajectory-point""#).count(), 1);
        assert!(!svg.contains(r#"class="track""#));
        roxmltree::Document::parse(&svg).unwrap();
    }

    #[test]
    fn empty_data_is_rejected() {
        assert!(matches!(plot_run(&RunRecord { trajectory: vec![], ..record(1) }), Err(IoError::EmptyData)));
        assert!(matches!(plot_sweep(&[]), Err(IoError::EmptyData)));
    }

    #[test]
    fn sweep_plot_has_one_rect_per_cell() {
        let cells: Vec<_> = [1.0, 2.0, 3.0]
            .iter()
            .flat_map(|&k| {
                [5.0, 10.0].map(|delta| SweepCell {
                    params: GridPoint { k, delta, k2: 35.0 },
                    metrics: None,
                    label: if k > 2.0 { CellLabel::Diverged } else { CellLabel::Converged },
                    error: None,
                })
            })
            .collect();
        let svg = plot_sweep(&cells).unwrap();
        assert_eq!(svg.matches(r#"class="cell""#).count(), 6);
        assert_eq!(svg.matches(r#"data-label="DIVERGED""#).count(), 2);
        roxmltree::Document::parse(&svg).unwrap();
    }

    #[test]
    fn tick_steps_are_round() {
        assert_eq!(tick_step(100.0, 10.0), 10.0);
        assert_eq!(tick_step(75.0, 8.0), 10.0);
        assert_eq!(tick_step(17.0, 8.0), 2.0);
        assert_eq!(tick_step(0.4, 8.0), 0.05);
    }
}
