use crate::error::{Error, Result};
use crate::quadrature::time_average;
use crate::scalar::Scalar;
use crate::trajectory::{DrivingCase, RoadContext};

/// Start of the overspeed ramp, as a multiple of the limit.
pub const OVERSPEED_TOLERANCE: f64 = 1.2;
/// Multiple of the limit at which the overspeed penalty saturates.
pub const OVERSPEED_SATURATION: f64 = 1.5;

/// Instantaneous time-efficiency penalty in `[0, 1]`, higher is worse.
///
/// Below the limit the penalty falls linearly from 1 at standstill to 0 at
/// the limit; it stays 0 up to 1.2x the limit, then ramps linearly to 1 at
/// 1.5x and saturates. The ramp is `(10/3) * (v / v_lim) - 4`, the affine
/// map through (1.2, 0) and (1.5, 1).
pub fn instantaneous_efficiency<T: Scalar>(v: T, v_lim: T) -> Result<T> {
    if !(v_lim > T::zero()) {
        return Err(Error::InvalidParam(format!("speed limit must be positive, got {v_lim}")));
    }
    let v = v.max(T::zero());
    if v < v_lim {
        return Ok(T::one() - v / v_lim);
    }
    if v <= v_lim * T::lit(OVERSPEED_TOLERANCE) {
        return Ok(T::zero());
    }
    if v >= v_lim * T::lit(OVERSPEED_SATURATION) {
        return Ok(T::one());
    }
    let ratio = v / v_lim;
    Ok(((T::lit(10.0) * ratio - T::lit(12.0)) / T::lit(3.0)).min(T::one()))
}

/// Per-frame efficiency penalties.
pub fn efficiency_series<T: Scalar>(case: &DrivingCase<T>, road: &RoadContext<T>) -> Result<Vec<T>> {
    case.frames
        .iter()
        .map(|f| instantaneous_efficiency(f.ego.body.speed, road.speed_limits_kmh.mps(f.ego.section)))
        .collect()
}

pub fn efficiency_score<T: Scalar>(case: &DrivingCase<T>, road: &RoadContext<T>) -> Result<T> {
    time_average(&case.times(), &efficiency_series(case, road)?)
}
