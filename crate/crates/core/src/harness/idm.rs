use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Intelligent Driver Model parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IdmParams {
    /// Desired speed (m/s).
    pub v0: f64,
    /// Time headway (s).
    pub time_headway: f64,
    /// Minimum standstill gap (m).
    pub min_gap: f64,
    /// Maximum acceleration (m/s^2).
    pub a_max: f64,
    /// Comfortable deceleration (m/s^2).
    pub b_comf: f64,
}

pub const IDM_EXPONENT: i32 = 4;

impl Default for IdmParams {
    fn default() -> Self {
        IdmParams { v0: 60.0 / 3.6, time_headway: 1.5, min_gap: 2.0, a_max: 1.5, b_comf: 2.0 }
    }
}

impl IdmParams {
    /// Defaults with the desired speed set to `v0`.
    pub fn with_v0(v0: f64) -> Self {
        IdmParams { v0, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.v0, self.time_headway, self.min_gap, self.a_max, self.b_comf];
        if all.iter().all(|v| v.is_finite() && *v > 0.0) {
            Ok(())
        } else {
            Err(Error::InvalidParam("idm parameters must be positive".into()))
        }
    }

    /// Desired dynamic gap for speed `v` and approach rate `dv`.
    pub fn desired_gap(&self, v: f64, dv: f64) -> f64 {
        let dynamic = v * self.time_headway + v * dv / (2.0 * (self.a_max * self.b_comf).sqrt());
        self.min_gap + dynamic.max(0.0)
    }

    /// Steady-state gap at speed `v` behind a leader moving at the same speed.
    pub fn equilibrium_gap(&self, v: f64) -> f64 {
        (self.min_gap + v * self.time_headway) / (1.0 - (v / self.v0).powi(IDM_EXPONENT)).sqrt()
    }
}

/// IDM acceleration. `gap` is bumper to bumper, `dv = v - v_leader`
/// (positive when closing). Pass `f64::INFINITY` for a free road.
pub fn idm_accel(v: f64, gap: f64, dv: f64, p: &IdmParams) -> Result<f64> {
    if !(gap > 0.0) {
        return Err(Error::InvalidParam(format!("idm gap must be positive, got {gap}")));
    }
    let free = 1.0 - (v / p.v0).powi(IDM_EXPONENT);
    let interaction = if gap.is_infinite() { 0.0 } else { (p.desired_gap(v, dv) / gap).powi(2) };
    Ok(p.a_max * (free - interaction))
}
