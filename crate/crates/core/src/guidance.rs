//! Proportional heading control with optional cross-track feedback.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Angle;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GuidanceError {
    #[error("non-finite input: {0}")]
    NonFiniteInput(&'static str),
    #[error("invalid guidance parameter: {0}")]
    InvalidParameter(String),
}

/// Which control law produces the lateral command `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum ControlLaw {
    /// `u = K·(ψ_d - ψ)·v_a`
    #[default]
    #[serde(rename = "P", alias = "p")]
    P,
    /// `u = K₁·(ψ_d - ψ)·v_a - K₂·e`
    #[serde(rename = "P_CTE", alias = "p_cte")]
    PCte,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Saturation {
    /// Clamp to `[-u_max, u_max]`.
    #[default]
    Symmetric,
    /// Clamp only from above, as the original listing does.
    UpperOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GuidanceParams {
    /// Proportional heading gain `K` (1/s).
    pub k: f64,
    /// Heading gain of the cross-track augmented law (1/s).
    pub k1: f64,
    /// Cross-track gain, applied to `e` in meters.
    pub k2: f64,
    /// Lookahead distance from the projection to the virtual target (m).
    pub delta: f64,
    /// Bound on the lateral command (m/s²).
    pub u_max: f64,
    pub law: ControlLaw,
    pub saturation: Saturation,
}

impl Default for GuidanceParams {
    fn default() -> Self {
        Self {
            k: 0.5,
            k1: 0.5,
            k2: 35.0,
            delta: 5.0,
            u_max: 1.0,
            law: ControlLaw::P,
            saturation: Saturation::Symmetric,
        }
    }
}

impl GuidanceParams {
    pub fn validate(&self) -> Result<(), GuidanceError> {
        let checks = [
            (self.k > 0.0, "k must be > 0"),
            (self.k1 > 0.0, "k1 must be > 0"),
            (self.k2 >= 0.0, "k2 must be >= 0"),
            (self.delta > 0.0, "delta must be > 0"),
            (self.u_max > 0.0, "u_max must be > 0"),
        ];
        for (ok, msg) in checks {
            if !ok {
                return Err(GuidanceError::InvalidParameter(msg.to_string()));
            }
        }
        let all_finite = [self.k, self.k1, self.k2, self.delta, self.u_max].iter().all(|v| v.is_finite());
        if !all_finite {
            return Err(GuidanceError::InvalidParameter("gains must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ControlOutput {
    /// Command after saturation.
    pub u: f64,
    /// Command before saturation.
    pub u_raw: f64,
    pub psi_d: Angle,
    /// `wrap(ψ_d - ψ)`.
    pub heading_error: f64,
}

/// Symmetric clamp to `[-u_max, u_max]`.
pub fn saturate(u_raw: f64, u_max: f64) -> Result<f64, GuidanceError> {
    if !u_raw.is_finite() || !u_max.is_finite() {
        return Err(GuidanceError::NonFiniteInput("command"));
    }
    Ok(u_raw.clamp(-u_max, u_max))
}

fn limit(u_raw: f64, params: &GuidanceParams) -> f64 {
    match params.saturation {
        Saturation::Symmetric => u_raw.clamp(-params.u_max, params.u_max),
        Saturation::UpperOnly => u_raw.min(params.u_max),
    }
}

pub fn p_law(psi_d: Angle, psi: Angle, v_a: f64, params: &GuidanceParams) -> ControlOutput {
    let heading_error = psi_d.diff(psi).radians();
    let u_raw = params.k * heading_error * v_a;
    ControlOutput { u: limit(u_raw, params), u_raw, psi_d, heading_error }
}

/// The cross-track term is subtracted: with `e` positive to the left of the
/// path, a positive offset produces a rightward (negative) command.
pub fn p_cte_law(psi_d: Angle, psi: Angle, e: f64, v_a: f64, params: &GuidanceParams) -> ControlOutput {
    let heading_error = psi_d.diff(psi).radians();
    let u_raw = params.k1 * heading_error * v_a - params.k2 * e;
    ControlOutput { u: limit(u_raw, params), u_raw, psi_d, heading_error }
}

/// Dispatches on `params.law`.
pub fn command(psi_d: Angle, psi: Angle, e: f64, v_a: f64, params: &GuidanceParams) -> ControlOutput {
    match params.law {
        ControlLaw::P => p_law(psi_d, psi, v_a, params),
        ControlLaw::PCte => p_cte_law(psi_d, psi, e, v_a, params),
    }
}
