//! Grid sweeps over guidance gains and lookahead distance.
//!
//! Each grid point is an independent simulation of the same scenario. Cells
//! may be evaluated in parallel; the output is always in lexicographic
//! `(K, δ, K₂)` order, so results do not depend on thread count.

use std::collections::BTreeSet;

use ordered_float::OrderedFloat;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Point2;
use crate::simulator::{run_mission, Metrics, SimConfig, SimError};

/// Environment variable capping sweep parallelism.
pub const THREADS_ENV: &str = "CARROT_GUIDE_THREADS";

/// `slow_threshold` defaults to this multiple of the baseline run's steps.
pub const SLOW_FACTOR: usize = 4;
pub const BASELINE_K: f64 = 0.5;
pub const BASELINE_DELTA: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("invalid sweep spec: {0}")]
    InvalidSpec(String),
    #[error("cells do not form a rectangular (K, delta) grid")]
    NonRectangularGrid,
    #[error("failed to build thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: SimConfig,
    pub k_values: Vec<f64>,
    pub delta_values: Vec<f64>,
    /// When absent, every cell uses `base.guidance.k2`.
    pub k2_values: Option<Vec<f64>>,
    pub waypoints: Vec<Point2>,
    /// Overrides the baseline-derived threshold.
    pub slow_threshold: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub k: f64,
    pub delta: f64,
    pub k2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CellLabel {
    Converged,
    Slow,
    Diverged,
    Timeout,
    Error,
}

impl CellLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            CellLabel::Converged => "CONVERGED",
            CellLabel::Slow => "SLOW",
            CellLabel::Diverged => "DIVERGED",
            CellLabel::Timeout => "TIMEOUT",
            CellLabel::Error => "ERROR",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCell {
    pub params: GridPoint,
    pub metrics: Option<Metrics>,
    pub label: CellLabel,
    /// Simulator error for `CellLabel::Error` cells.
    pub error: Option<String>,
}

pub fn classify(metrics: &Metrics, slow_threshold: usize) -> CellLabel {
    if metrics.diverged {
        return CellLabel::Diverged;
    }
    match metrics.steps_to_converge {
        Some(steps) if steps <= slow_threshold => CellLabel::Converged,
        Some(_) => CellLabel::Slow,
        None => CellLabel::Timeout,
    }
}

fn sorted_axis(name: &str, values: &[f64]) -> Result<Vec<f64>, SweepError> {
    if values.is_empty() {
        return Err(SweepError::InvalidSpec(format!("{name} grid is empty")));
    }
    if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(SweepError::InvalidSpec(format!("{name} value {v} must be finite and > 0")));
    }
    let set: BTreeSet<OrderedFloat<f64>> = values.iter().copied().map(OrderedFloat).collect();
    Ok(set.into_iter().map(|v| v.0).collect())
}

impl SweepSpec {
    /// The grid in output order.
    pub fn grid(&self) -> Result<Vec<GridPoint>, SweepError> {
        let ks = sorted_axis("k", &self.k_values)?;
        let deltas = sorted_axis("delta", &self.delta_values)?;
        let k2s = match &self.k2_values {
            Some(values) => {
                if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                    return Err(SweepError::InvalidSpec("k2 values must be finite and >= 0".into()));
                }
                if values.is_empty() {
                    return Err(SweepError::InvalidSpec("k2 grid is empty".into()));
                }
                let set: BTreeSet<OrderedFloat<f64>> = values.iter().copied().map(OrderedFloat).collect();
                set.into_iter().map(|v| v.0).collect()
            }
            None => vec![self.base.guidance.k2],
        };
        let mut grid = Vec::with_capacity(ks.len() * deltas.len() * k2s.len());
        for &k in &ks {
            for &delta in &deltas {
                for &k2 in &k2s {
                    grid.push(GridPoint { k, delta, k2 });
                }
            }
        }
        Ok(grid)
    }

    /// Scenario config for one grid point. The K axis drives both the P gain
    /// and the heading gain of the augmented law.
    pub fn config_for(&self, point: GridPoint) -> SimConfig {
        let mut config = self.base;
        config.guidance.k = point.k;
        config.guidance.k1 = point.k;
        config.guidance.delta = point.delta;
        config.guidance.k2 = point.k2;
        config
    }

    /// Explicit threshold, else `4 ×` the steps of the `(K = 0.5, δ = 5)`
    /// run, else `max_steps` when the baseline does not converge.
    pub fn resolve_slow_threshold(&self) -> usize {
        if let Some(t) = self.slow_threshold {
            return t;
        }
        let point = GridPoint { k: BASELINE_K, delta: BASELINE_DELTA, k2: self.base.guidance.k2 };
        run_mission(&self.config_for(point), &self.waypoints)
            .ok()
            .and_then(|run| if run.metrics.diverged { None } else { run.metrics.steps_to_converge })
            .map_or(self.base.max_steps, |steps| SLOW_FACTOR * steps.max(1))
    }
}

fn evaluate(spec: &SweepSpec, point: GridPoint, slow_threshold: usize) -> SweepCell {
    match run_mission(&spec.config_for(point), &spec.waypoints) {
        Ok(run) => SweepCell {
            params: point,
            label: classify(&run.metrics, slow_threshold),
            metrics: Some(run.metrics),
            error: None,
        },
        Err(err) => SweepCell { params: point, metrics: None, label: CellLabel::Error, error: Some(describe(&err)) },
    }
}

fn describe(err: &SimError) -> String {
    match err {
        SimError::Geometry(g) => format!("{}: {g}", geometry_error_name(g)),
        other => other.to_string(),
    }
}

fn geometry_error_name(err: &crate::geometry::GeometryError) -> &'static str {
    use crate::geometry::GeometryError::*;
    match err {
        DegenerateSegment(..) => "DegenerateSegment",
        DegenerateTarget(_) => "DegenerateTarget",
        NonFiniteInput(_) => "NonFiniteInput",
    }
}

/// Thread count from `CARROT_GUIDE_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|n: &usize| *n > 0)
}

/// Runs the sweep with parallelism capped by `CARROT_GUIDE_THREADS`.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepCell>, SweepError> {
    run_sweep_with_threads(spec, threads_from_env())
}

/// `threads = None` uses the machine's parallelism.
pub fn run_sweep_with_threads(spec: &SweepSpec, threads: Option<usize>) -> Result<Vec<SweepCell>, SweepError> {
    let grid = spec.grid()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| SweepError::ThreadPool(e.to_string()))?;
    let slow_threshold = spec.resolve_slow_threshold();
    Ok(pool.install(|| grid.par_iter().map(|&p| evaluate(spec, p, slow_threshold)).collect()))
}

/// For each δ, the smallest K whose cell is `DIVERGED`.
pub fn stability_boundary(cells: &[SweepCell]) -> Result<Vec<(f64, Option<f64>)>, SweepError> {
    let ks: BTreeSet<OrderedFloat<f64>> = cells.iter().map(|c| OrderedFloat(c.params.k)).collect();
    let deltas: BTreeSet<OrderedFloat<f64>> = cells.iter().map(|c| OrderedFloat(c.params.delta)).collect();
    let pairs: BTreeSet<(OrderedFloat<f64>, OrderedFloat<f64>)> =
        cells.iter().map(|c| (OrderedFloat(c.params.k), OrderedFloat(c.params.delta))).collect();
    if cells.is_empty() || pairs.len() != cells.len() || pairs.len() != ks.len() * deltas.len() {
        return Err(SweepError::NonRectangularGrid);
    }

    Ok(deltas
        .iter()
        .map(|&delta| {
            let k_critical = cells
                .iter()
                .filter(|c| OrderedFloat(c.params.delta) == delta && c.label == CellLabel::Diverged)
                .map(|c| OrderedFloat(c.params.k))
                .min()
                .map(|k| k.0);
            (delta.0, k_critical)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn metrics(steps: Option<usize>, diverged: bool) -> Metrics {
        Metrics {
            steps_to_converge: steps,
            max_abs_e: 1.0,
            final_abs_e: 0.1,
            integral_abs_e: 1.0,
            diverged,
            segments_completed: usize::from(steps.is_some()),
        }
    }

    fn cell(k: f64, delta: f64, label: CellLabel) -> SweepCell {
        SweepCell { params: GridPoint { k, delta, k2: 0.0 }, metrics: None, label, error: None }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&metrics(None, true), 1000), CellLabel::Diverged);
        assert_eq!(classify(&metrics(Some(10), false), 1000), CellLabel::Converged);
        assert_eq!(classify(&metrics(Some(1000), false), 1000), CellLabel::Converged);
        assert_eq!(classify(&metrics(Some(1001), false), 1000), CellLabel::Slow);
        assert_eq!(classify(&metrics(None, false), 1000), CellLabel::Timeout);
    }

    #[test]
    fn boundary_all_converged() {
        let cells: Vec<_> =
            [1.0, 2.0].iter().flat_map(|&k| [5.0, 10.0].map(|d| cell(k, d, CellLabel::Converged))).collect();
        assert_eq!(stability_boundary(&cells).unwrap(), vec![(5.0, None), (10.0, None)]);
    }

    #[test]
    fn boundary_synthetic_threshold() {
        let cells: Vec<_> = (1..=60)
            .flat_map(|k| {
                let k = k as f64;
                let label = if k >= 30.0 { CellLabel::Diverged } else { CellLabel::Converged };
                [5.0, 10.0, 20.0].map(|d| cell(k, d, label))
            })
            .collect();
        let b = stability_boundary(&cells).unwrap();
        assert_eq!(b, vec![(5.0, Some(30.0)), (10.0, Some(30.0)), (20.0, Some(30.0))]);
    }

    #[test]
    fn boundary_rejects_ragged_grid() {
        let cells = vec![
            cell(1.0, 5.0, CellLabel::Converged),
            cell(2.0, 5.0, CellLabel::Converged),
            cell(1.0, 10.0, CellLabel::Converged),
        ];
        assert_eq!(stability_boundary(&cells), Err(SweepError::NonRectangularGrid));
        let dup = vec![cell(1.0, 5.0, CellLabel::Converged), cell(1.0, 5.0, CellLabel::Diverged)];
        assert_eq!(stability_boundary(&dup), Err(SweepError::NonRectangularGrid));
        assert_eq!(stability_boundary(&[]), Err(SweepError::NonRectangularGrid));
    }

    #[test]
    fn grid_is_sorted_and_deduplicated() {
        let spec = SweepSpec {
            base: SimConfig::default(),
            k_values: vec![2.0, 1.0, 2.0],
            delta_values: vec![10.0, 5.0],
            k2_values: Some(vec![35.0, 0.0]),
            waypoints: vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)],
            slow_threshold: None,
        };
        let grid = spec.grid().unwrap();
        let keys: Vec<_> = grid.iter().map(|p| (p.k, p.delta, p.k2)).collect();
        assert_eq!(
            keys,
            vec![
                (1.0, 5.0, 0.0),
                (1.0, 5.0, 35.0),
                (1.0, 10.0, 0.0),
                (1.0, 10.0, 35.0),
                (2.0, 5.0, 0.0),
                (2.0, 5.0, 35.0),
                (2.0, 10.0, 0.0),
                (2.0, 10.0, 35.0),
            ]
        );
    }

    #[test]
    fn invalid_grids_are_rejected() {
        let base = SweepSpec {
            base: SimConfig::default(),
            k_values: vec![1.0],
            delta_values: vec![5.0],
            k2_values: None,
            waypoints: vec![],
            slow_threshold: None,
        };
        assert!(SweepSpec { k_values: vec![], ..base.clone() }.grid().is_err());
        assert!(SweepSpec { delta_values: vec![-1.0], ..base.clone() }.grid().is_err());
        assert!(SweepSpec { k2_values: Some(vec![]), ..base.clone() }.grid().is_err());
        assert!(SweepSpec { k_values: vec![f64::NAN], ..base }.grid().is_err());
    }
}
