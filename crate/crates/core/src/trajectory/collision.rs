//! Oriented bounding-box overlap by the separating-axis test.

use super::types::*;
use crate::scalar::Scalar;

/// Slack (m) under which projected intervals count as touching.
pub const CONTACT_TOLERANCE: f64 = 1e-9;

fn axes<T: Scalar>(b: &Body<T>) -> [(T, T); 2] {
    let (s, c) = b.heading.sin_cos();
    [(c, s), (-s, c)]
}

fn project<T: Scalar>(b: &Body<T>, axis: (T, T)) -> (T, T) {
    let [(lx, ly), (wx, wy)] = axes(b);
    let center = b.x * axis.0 + b.y * axis.1;
    let half = T::lit(0.5);
    let r = (b.length * half * (lx * axis.0 + ly * axis.1)).abs() + (b.width * half * (wx * axis.0 + wy * axis.1)).abs();
    (center - r, center + r)
}

/// Closed overlap test: boxes that merely touch collide.
pub fn boxes_overlap<T: Scalar>(a: &Body<T>, b: &Body<T>) -> bool {
    let tol = T::lit(CONTACT_TOLERANCE);
    for axis in axes(a).into_iter().chain(axes(b)) {
        let (a0, a1) = project(a, axis);
        let (b0, b1) = project(b, axis);
        if a1 + tol < b0 || b1 + tol < a0 {
            return false;
        }
    }
    true
}

pub fn frame_collides<T: Scalar>(frame: &SceneFrame<T>) -> bool {
    frame.agents.iter().any(|a| boxes_overlap(&frame.ego.body, &a.body))
}

pub fn detect_crash<T: Scalar>(case: &DrivingCase<T>) -> bool {
    case.frames.iter().any(frame_collides)
}
