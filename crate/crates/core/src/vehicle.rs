//! Constant-speed planar vehicle and its two step functions.
//!
//! [`step_kinematic`] integrates `ẋ = v·cosψ, ẏ = v·sinψ, ψ̇ = K·(ψ_d - ψ)`
//! with explicit Euler. [`step_reference`] reproduces the update of the
//! original code listing instead: the heading snaps to `ψ_d`, the command
//! perturbs the lateral velocity, and the forward component is recovered
//! from the speed constraint (so it is never negative).

use serde::{Deserialize, Serialize};

use crate::geometry::{Angle, Point2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    #[default]
    Kinematic,
    Reference,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VehicleState {
    pub position: Point2,
    pub psi: Angle,
    /// Speed in m/s, constant over a run.
    pub v_a: f64,
    pub t: f64,
}

impl VehicleState {
    pub fn new(position: Point2, psi: Angle, v_a: f64) -> Self {
        Self { position, psi, v_a, t: 0.0 }
    }
}

pub fn step_kinematic(state: &VehicleState, psi_d: Angle, k: f64, dt: f64) -> VehicleState {
    let psi = state.psi;
    let psi_rate = k * psi_d.diff(psi).radians();
    let (s, c) = psi.radians().sin_cos();
    VehicleState {
        position: Point2::new(state.position.x + state.v_a * c * dt, state.position.y + state.v_a * s * dt),
        psi: psi.offset(psi_rate * dt),
        v_a: state.v_a,
        t: state.t + dt,
    }
}

pub fn step_reference(state: &VehicleState, psi_d: Angle, u: f64, dt: f64) -> VehicleState {
    let v_a = state.v_a;
    let v_y = (v_a * psi_d.sin() + u * dt).clamp(-v_a, v_a);
    let v_x = (v_a * v_a - v_y * v_y).max(0.0).sqrt();
    VehicleState {
        position: Point2::new(state.position.x + v_x * dt, state.position.y + v_y * dt),
        psi: psi_d,
        v_a,
        t: state.t + dt,
    }
}
