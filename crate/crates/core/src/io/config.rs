//! TOML run configuration and sweep specification.
//!
//! ```toml
//! v_a = 25.0
//! dt = 0.05
//! integrator = "kinematic"   # or "reference"
//! geometry = "signed"        # or "listing"
//! e_stop = 0.2
//! capture_radius = 10.0      # default 2·delta
//! max_steps = 20000
//!
//! [guidance]
//! law = "P"                  # or "P_CTE"
//! k = 0.5
//! k1 = 0.5
//! k2 = 35.0
//! delta = 5.0
//! u_max = 1.0
//! saturation = "symmetric"   # or "upper_only"
//!
//! [initial]
//! x = 10.0
//! y = 28.0
//! psi = 0.9
//! ```
//!
//! Every key is optional; unknown keys are rejected.

use serde::Serialize;
use toml::{Table, Value};

use super::IoError;
use crate::geometry::{Angle, Point2};
use crate::guidance::{ControlLaw, Saturation};
use crate::simulator::{GeometryMode, SimConfig};
use crate::sweep::SweepSpec;

const TOP_KEYS: &[&str] =
    &["v_a", "dt", "integrator", "geometry", "e_stop", "capture_radius", "max_steps", "guidance", "initial"];
const GUIDANCE_KEYS: &[&str] = &["law", "k", "K", "k1", "K1", "k2", "K2", "delta", "u_max", "saturation"];
const INITIAL_KEYS: &[&str] = &["x", "y", "psi"];
const SWEEP_KEYS: &[&str] = &["k_values", "delta_values", "k2_values", "slow_threshold", "waypoints", "base"];

fn parse_document(text: &str) -> Result<Table, IoError> {
    text.parse::<Table>().map_err(|e| {
        let line = e.span().map_or(0, |span| text[..span.start.min(text.len())].lines().count().max(1));
        IoError::Parse { line, message: e.message().to_string() }
    })
}

fn check_keys(table: &Table, allowed: &[&str], prefix: &str) -> Result<(), IoError> {
    match table.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(IoError::UnknownKey(format!("{prefix}{k}"))),
        None => Ok(()),
    }
}

fn type_error(key: &str, expected: &str) -> IoError {
    IoError::Parse { line: 0, message: format!("`{key}` must be {expected}") }
}

fn get_f64(table: &Table, key: &str) -> Result<Option<f64>, IoError> {
    match table.get(key) {
        None => Ok(None),
        Some(Value::Float(v)) => Ok(Some(*v)),
        Some(Value::Integer(v)) => Ok(Some(*v as f64)),
        Some(_) => Err(type_error(key, "a number")),
    }
}

/// Looks a gain up under its lowercase name or its uppercase alias.
fn get_gain(table: &Table, key: &str, alias: &str) -> Result<Option<f64>, IoError> {
    if table.contains_key(key) && table.contains_key(alias) {
        return Err(IoError::Parse { line: 0, message: format!("both `{key}` and `{alias}` given") });
    }
    Ok(get_f64(table, key)?.or(get_f64(table, alias)?))
}

fn get_str<'a>(table: &'a Table, key: &str) -> Result<Option<&'a str>, IoError> {
    match table.get(key) {
        None => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.as_str())),
        Some(_) => Err(type_error(key, "a string")),
    }
}

fn get_table<'a>(table: &'a Table, key: &str) -> Result<Option<&'a Table>, IoError> {
    match table.get(key) {
        None => Ok(None),
        Some(Value::Table(t)) => Ok(Some(t)),
        Some(_) => Err(type_error(key, "a table")),
    }
}

fn get_count(table: &Table, key: &str) -> Result<Option<usize>, IoError> {
    match table.get(key) {
        None => Ok(None),
        Some(Value::Integer(v)) if *v >= 0 => Ok(Some(*v as usize)),
        Some(Value::Integer(v)) => Err(IoError::InvariantViolation(format!("{key} = {v} must be >= 0"))),
        Some(_) => Err(type_error(key, "an integer")),
    }
}

fn enum_value<T: Copy>(key: &str, raw: &str, options: &[(&str, T)]) -> Result<T, IoError> {
    options.iter().find(|(name, _)| name.eq_ignore_ascii_case(raw)).map(|(_, v)| *v).ok_or_else(|| {
        let names: Vec<_> = options.iter().map(|(n, _)| *n).collect();
        IoError::Parse { line: 0, message: format!("`{key}` = \"{raw}\", expected one of {names:?}") }
    })
}

fn config_from_table(table: &Table, prefix: &str) -> Result<SimConfig, IoError> {
    check_keys(table, TOP_KEYS, prefix)?;
    let mut config = SimConfig::default();

    if let Some(v) = get_f64(table, "v_a")? {
        config.v_a = v;
    }
    if let Some(v) = get_f64(table, "dt")? {
        config.dt = v;
    }
    if let Some(v) = get_f64(table, "e_stop")? {
        config.e_stop = v;
    }
    if let Some(v) = get_f64(table, "capture_radius")? {
        config.capture_radius = Some(v);
    }
    if let Some(v) = get_count(table, "max_steps")? {
        config.max_steps = v;
    }
    if let Some(s) = get_str(table, "integrator")? {
        use crate::vehicle::Integrator::*;
        config.integrator = enum_value("integrator", s, &[("kinematic", Kinematic), ("reference", Reference)])?;
    }
    if let Some(s) = get_str(table, "geometry")? {
        config.geometry =
            enum_value("geometry", s, &[("signed", GeometryMode::Signed), ("listing", GeometryMode::Listing)])?;
    }

    if let Some(g) = get_table(table, "guidance")? {
        let gp = format!("{prefix}guidance.");
        check_keys(g, GUIDANCE_KEYS, &gp)?;
        let params = &mut config.guidance;
        if let Some(s) = get_str(g, "law")? {
            params.law = enum_value("law", s, &[("P", ControlLaw::P), ("P_CTE", ControlLaw::PCte)])?;
        }
        if let Some(s) = get_str(g, "saturation")? {
            params.saturation = enum_value(
                "saturation",
                s,
                &[("symmetric", Saturation::Symmetric), ("upper_only", Saturation::UpperOnly)],
            )?;
        }
        if let Some(v) = get_gain(g, "k", "K")? {
            params.k = v;
        }
        if let Some(v) = get_gain(g, "k1", "K1")? {
            params.k1 = v;
        }
        if let Some(v) = get_gain(g, "k2", "K2")? {
            params.k2 = v;
        }
        if let Some(v) = get_f64(g, "delta")? {
            params.delta = v;
        }
        if let Some(v) = get_f64(g, "u_max")? {
            params.u_max = v;
        }
    }

    if let Some(init) = get_table(table, "initial")? {
        check_keys(init, INITIAL_KEYS, &format!("{prefix}initial."))?;
        let x = get_f64(init, "x")?.unwrap_or(config.initial_position.x);
        let y = get_f64(init, "y")?.unwrap_or(config.initial_position.y);
        config.initial_position = Point2::new(x, y);
        if let Some(psi) = get_f64(init, "psi")? {
            config.initial_heading =
                Angle::new(psi).map_err(|_| IoError::InvariantViolation("initial psi must be finite".into()))?;
        }
    }

    config.validate().map_err(|e| IoError::InvariantViolation(e.to_string()))?;
    Ok(config)
}

pub fn parse_config(text: &str) -> Result<SimConfig, IoError> {
    config_from_table(&parse_document(text)?, "")
}

#[derive(Serialize)]
struct ConfigDoc<'a> {
    v_a: f64,
    dt: f64,
    integrator: &'a str,
    geometry: &'a str,
    e_stop: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    capture_radius: Option<f64>,
    max_steps: usize,
    guidance: GuidanceDoc<'a>,
    initial: InitialDoc,
}

#[derive(Serialize)]
struct GuidanceDoc<'a> {
    law: &'a str,
    k: f64,
    k1: f64,
    k2: f64,
    delta: f64,
    u_max: f64,
    saturation: &'a str,
}

#[derive(Serialize)]
struct InitialDoc {
    x: f64,
    y: f64,
    psi: f64,
}

/// Renders a config that [`parse_config`] reads back to the same value.
pub fn config_to_toml(config: &SimConfig) -> String {
    use crate::vehicle::Integrator;
    let g = &config.guidance;
    let doc = ConfigDoc {
        v_a: config.v_a,
        dt: config.dt,
        integrator: match config.integrator {
            Integrator::Kinematic => "kinematic",
            Integrator::Reference => "reference",
        },
        geometry: match config.geometry {
            GeometryMode::Signed => "signed",
            GeometryMode::Listing => "listing",
        },
        e_stop: config.e_stop,
        capture_radius: config.capture_radius,
        max_steps: config.max_steps,
        guidance: GuidanceDoc {
            law: match g.law {
                ControlLaw::P => "P",
                ControlLaw::PCte => "P_CTE",
            },
            k: g.k,
            k1: g.k1,
            k2: g.k2,
            delta: g.delta,
            u_max: g.u_max,
            saturation: match g.saturation {
                Saturation::Symmetric => "symmetric",
                Saturation::UpperOnly => "upper_only",
            },
        },
        initial: InitialDoc {
            x: config.initial_position.x,
            y: config.initial_position.y,
            psi: config.initial_heading.radians(),
        },
    };
    toml::to_string(&doc).expect("config document serializes")
}

fn number_list(table: &Table, key: &str) -> Result<Option<Vec<f64>>, IoError> {
    match table.get(key) {
        None => Ok(None),
        Some(Value::Array(items)) => items
            .iter()
            .map(|v| match v {
                Value::Float(f) => Ok(*f),
                Value::Integer(i) => Ok(*i as f64),
                _ => Err(type_error(key, "an array of numbers")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some),
        Some(_) => Err(type_error(key, "an array of numbers")),
    }
}

/// Sweep spec document:
///
/// ```toml
/// k_values = [1, 2, 3]
/// delta_values = [5, 10, 20]
/// k2_values = [35]          # optional
/// slow_threshold = 84       # optional
/// waypoints = [[6, 12], [65, 35]]
///
/// [base]                    # same schema as a run config
/// integrator = "reference"
/// ```
///
/// Waypoints are not checked for degeneracy here: a degenerate scenario
/// yields error-labelled cells rather than a failed sweep.
pub fn parse_sweep_spec(text: &str) -> Result<SweepSpec, IoError> {
    let table = parse_document(text)?;
    check_keys(&table, SWEEP_KEYS, "")?;

    let base = match get_table(&table, "base")? {
        Some(t) => config_from_table(t, "base.")?,
        None => SimConfig::default(),
    };
    let k_values = number_list(&table, "k_values")?.unwrap_or_else(|| vec![base.guidance.k]);
    let delta_values = number_list(&table, "delta_values")?.unwrap_or_else(|| vec![base.guidance.delta]);
    let k2_values = number_list(&table, "k2_values")?;
    let slow_threshold = get_count(&table, "slow_threshold")?;

    let waypoints = match table.get("waypoints") {
        Some(Value::Array(rows)) => rows
            .iter()
            .map(|row| match row {
                Value::Array(xy) if xy.len() == 2 => {
                    let num = |v: &Value| match v {
                        Value::Float(f) => Some(*f),
                        Value::Integer(i) => Some(*i as f64),
                        _ => None,
                    };
                    match (num(&xy[0]), num(&xy[1])) {
                        (Some(x), Some(y)) if x.is_finite() && y.is_finite() => Ok(Point2::new(x, y)),
                        _ => Err(type_error("waypoints", "pairs of finite numbers")),
                    }
                }
                _ => Err(type_error("waypoints", "an array of [x, y] pairs")),
            })
            .collect::<Result<Vec<_>, _>>()?,
        Some(_) => return Err(type_error("waypoints", "an array of [x, y] pairs")),
        None => return Err(IoError::InvariantViolation("sweep spec needs `waypoints`".into())),
    };
    if waypoints.len() < 2 {
        return Err(IoError::TooFewWaypoints(waypoints.len()));
    }

    let spec = SweepSpec { base, k_values, delta_values, k2_values, waypoints, slow_threshold };
    spec.grid().map_err(|e| IoError::InvariantViolation(e.to_string()))?;
    Ok(spec)
}
