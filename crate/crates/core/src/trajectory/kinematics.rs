//! Finite-difference kinematics.
//!
//! Central differences in the interior, one-sided at the endpoints. Values
//! at frame `i` depend on frames up to `i + 3` (position-derived speed, then
//! acceleration, then jerk), which is what [`refresh_from`] relies on when a
//! stream appends frames.

use super::types::*;
use crate::error::{Error, Result};
use crate::scalar::{wrap_angle, Scalar};

/// Frames before the newest one whose derived values may still change.
pub const KINEMATIC_LAG: usize = 4;

fn diff_at<T: Scalar>(times: &[T], vals: &[T], i: usize) -> T {
    let n = vals.len();
    let (lo, hi) = if i == 0 { (0, 1) } else if i == n - 1 { (n - 2, n - 1) } else { (i - 1, i + 1) };
    (vals[hi] - vals[lo]) / (times[hi] - times[lo])
}

fn heading_rate_at<T: Scalar>(frames: &[SceneFrame<T>], i: usize) -> T {
    let n = frames.len();
    let (lo, hi) = if i == 0 { (0, 1) } else if i == n - 1 { (n - 2, n - 1) } else { (i - 1, i + 1) };
    let dh = wrap_angle(frames[hi].ego.body.heading - frames[lo].ego.body.heading);
    dh / (frames[hi].t - frames[lo].t)
}

fn position_speed_at<T: Scalar>(frames: &[SceneFrame<T>], i: usize) -> T {
    let n = frames.len();
    let (lo, hi) = if i == 0 { (0, 1) } else if i == n - 1 { (n - 2, n - 1) } else { (i - 1, i + 1) };
    let a = &frames[lo].ego.body;
    let b = &frames[hi].ego.body;
    (b.x - a.x).hypot(b.y - a.y) / (frames[hi].t - frames[lo].t)
}

/// Recomputes derived ego quantities for frames `start..` (all layers).
/// Frames before `start` must already hold final values.
pub fn refresh_from<T: Scalar>(frames: &mut [SceneFrame<T>], start: usize, source: SpeedSource) -> Result<()> {
    let n = frames.len();
    if n < 2 {
        return Err(Error::Validation("fewer than 2 frames".into()));
    }
    for i in start.max(1)..n {
        if !(frames[i].t > frames[i - 1].t) {
            return Err(Error::Validation(format!("zero or negative time step at frame {i}")));
        }
    }
    let start = start.min(n);
    if source == SpeedSource::Positions {
        let speeds: Vec<T> = (start..n).map(|i| position_speed_at(frames, i)).collect();
        for (i, v) in (start..n).zip(speeds) {
            frames[i].ego.body.speed = v;
            frames[i].ego.body.v_long = v;
        }
    }
    let times: Vec<T> = frames.iter().map(|f| f.t).collect();
    let speed: Vec<T> = frames.iter().map(|f| f.ego.body.speed).collect();
    for i in start..n {
        let yaw_rate = heading_rate_at(frames, i);
        let k = &mut frames[i].ego.kin;
        k.yaw_rate = yaw_rate;
        k.accel_long = diff_at(&times, &speed, i);
        k.accel_lat = speed[i] * yaw_rate;
    }
    let a_long: Vec<T> = frames.iter().map(|f| f.ego.kin.accel_long).collect();
    let a_lat: Vec<T> = frames.iter().map(|f| f.ego.kin.accel_lat).collect();
    for (i, f) in frames.iter_mut().enumerate().take(n).skip(start) {
        f.ego.kin.jerk_long = diff_at(&times, &a_long, i);
        f.ego.kin.jerk_lat = diff_at(&times, &a_lat, i);
    }
    for f in &frames[start..] {
        let k = &f.ego.kin;
        if ![k.accel_long, k.accel_lat, k.jerk_long, k.jerk_lat, k.yaw_rate].iter().all(|v| v.is_finite()) {
            return Err(Error::Validation(format!("non-finite kinematics at t={}", f.t)));
        }
    }
    Ok(())
}

/// Fills acceleration, jerk and yaw rate on every ego state.
pub fn derive_kinematics<T: Scalar>(mut case: DrivingCase<T>) -> Result<DrivingCase<T>> {
    let source = case.speed_source;
    refresh_from(&mut case.frames, 0, source)?;
    case.speed_source = SpeedSource::Logged;
    Ok(case)
}
