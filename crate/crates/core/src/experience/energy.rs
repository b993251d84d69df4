//! Vehicle-end power demand: inertia, aerodynamic drag, grade and rolling
//! resistance. Speeds enter the laws in km/h, results are in kW.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::time_average;
use crate::scalar::Scalar;
use crate::trajectory::{DrivingCase, EgoState, RoadContext};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, bound(deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct VehicleParams<T> {
    /// Vehicle mass (kg). `None` uses the ego mass from the case log.
    pub mass: Option<T>,
    /// Rotating-mass conversion coefficient.
    pub delta: T,
    pub drag_coeff: T,
    /// Frontal area (m^2).
    pub frontal_area: T,
    pub gravity: T,
}

impl<T: Scalar> Default for VehicleParams<T> {
    fn default() -> Self {
        VehicleParams { mass: None, delta: T::lit(1.1), drag_coeff: T::lit(0.30), frontal_area: T::lit(2.0), gravity: T::lit(9.81) }
    }
}

impl<T: Scalar> VehicleParams<T> {
    pub fn validate(&self) -> Result<()> {
        let mass_ok = self.mass.is_none_or(|m| m > T::zero());
        if !(mass_ok && self.delta >= T::one() && self.drag_coeff > T::zero() && self.frontal_area > T::zero() && self.gravity > T::zero()) {
            return Err(Error::InvalidParam("vehicle parameters must be positive with delta >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PowerBreakdown<T> {
    pub accel: T,
    pub wind: T,
    pub grade: T,
    pub roll: T,
    pub total: T,
}

/// Power terms for a speed `v` (m/s) and longitudinal acceleration (m/s^2).
pub fn power_terms<T: Scalar>(v: T, accel: T, mass: T, vp: &VehicleParams<T>, road: &RoadContext<T>) -> PowerBreakdown<T> {
    let u_a = v * T::lit(3.6);
    let per_hour = T::lit(3600.0);
    let accel_p = vp.delta * mass * u_a / per_hour * accel;
    let wind = vp.drag_coeff * vp.frontal_area * u_a * u_a * u_a / T::lit(76140.0);
    let weight = mass * vp.gravity;
    let grade = weight * road.gradient * u_a / per_hour;
    let roll = weight * road.rolling_coeff * u_a / per_hour;
    PowerBreakdown { accel: accel_p, wind, grade, roll, total: accel_p + wind + grade + roll }
}

pub fn power_breakdown<T: Scalar>(ego: &EgoState<T>, vp: &VehicleParams<T>, road: &RoadContext<T>) -> PowerBreakdown<T> {
    let mass = vp.mass.unwrap_or(ego.body.mass);
    power_terms(ego.body.speed, ego.kin.accel_long, mass, vp, road)
}

/// Average power demand (kW). Kinematics must already be derived. May be
/// negative when braking dominates.
pub fn energy_score<T: Scalar>(case: &DrivingCase<T>, vp: &VehicleParams<T>, road: &RoadContext<T>) -> Result<T> {
    let p: Vec<T> = case.frames.iter().map(|f| power_breakdown(&f.ego, vp, road).total).collect();
    time_average(&case.times(), &p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn term_examples() {
        let vp = VehicleParams::<f64>::default();
        let road = RoadContext::<f64>::default();
        let p = power_terms(10.0, 1.0, 1500.0, &vp, &road);
        assert_relative_eq!(p.accel, 16.5, max_relative = 1e-12);
        assert_relative_eq!(p.roll, 14715.0 * 0.015 * 36.0 / 3600.0, max_relative = 1e-12);
        assert_relative_eq!(p.roll, 2.20725, max_relative = 1e-12);
        assert_eq!(p.grade, 0.0);
        let fast = power_terms(100.0 / 3.6, 0.0, 1500.0, &vp, &road);
        assert_relative_eq!(fast.wind, 0.3 * 2.0 * 1e6 / 76140.0, max_relative = 1e-12);
        assert_relative_eq!(fast.wind + fast.roll, 7.880220646178094 + 6.13125, max_relative = 1e-9);
        assert_relative_eq!(fast.total, fast.accel + fast.wind + fast.grade + fast.roll, max_relative = 1e-15);
    }

    #[test]
    fn mass_scaling_is_linear_without_drag() {
        let vp = VehicleParams::<f64>::default();
        let road = RoadContext { gradient: 0.03, ..RoadContext::default() };
        let p1 = power_terms(15.0, 0.7, 1200.0, &vp, &road);
        let p2 = power_terms(15.0, 0.7, 2400.0, &vp, &road);
        assert_relative_eq!(p2.total - p2.wind, 2.0 * (p1.total - p1.wind), max_relative = 1e-12);
        assert_eq!(p1.wind, p2.wind);
    }
}
