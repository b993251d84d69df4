//! Comfort: centripetal load, squared jerk and unpleasant-motion penalties.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::time_average;
use crate::scalar::{wrap_angle, Scalar};
use crate::trajectory::{DrivingCase, Kinematics};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, bound(deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct UpmPenalties<T> {
    pub u_turn: T,
    pub emergency_stop: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, bound(deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct ComfortParams<T> {
    /// Weight on squared jerk.
    pub k: T,
    pub upm_penalties: UpmPenalties<T>,
    /// Deceleration (m/s^2, positive) that counts as emergency braking.
    pub emergency_stop_decel: T,
    /// Minimum time the deceleration must be held (s).
    pub emergency_stop_min_duration: T,
    /// Heading change (deg) that counts as a U-turn.
    pub u_turn_heading_change_deg: T,
    /// Window in which the heading change must happen (s).
    pub u_turn_window: T,
}

impl<T: Scalar> Default for UpmPenalties<T> {
    fn default() -> Self {
        UpmPenalties { u_turn: T::lit(5.0), emergency_stop: T::lit(5.0) }
    }
}

impl<T: Scalar> Default for ComfortParams<T> {
    fn default() -> Self {
        ComfortParams {
            k: T::lit(0.5),
            upm_penalties: UpmPenalties::default(),
            emergency_stop_decel: T::lit(6.0),
            emergency_stop_min_duration: T::lit(0.3),
            u_turn_heading_change_deg: T::lit(150.0),
            u_turn_window: T::lit(10.0),
        }
    }
}

impl<T: Scalar> ComfortParams<T> {
    pub fn validate(&self) -> Result<()> {
        let p = &self.upm_penalties;
        let ok = self.k >= T::zero()
            && p.u_turn >= T::zero()
            && p.emergency_stop >= T::zero()
            && self.emergency_stop_decel > T::zero()
            && self.emergency_stop_min_duration > T::zero()
            && self.u_turn_heading_change_deg > T::zero()
            && self.u_turn_window > T::zero();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParam("comfort weights must be >= 0 and thresholds > 0".into()))
        }
    }
}

/// `|omega| * v + k * j^2 + loss`.
pub fn instantaneous_comfort<T: Scalar>(omega: T, v: T, jerk: T, loss: T, cp: &ComfortParams<T>) -> T {
    omega.abs() * v.abs() + cp.k * jerk * jerk + loss
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MotionEventKind {
    UTurn,
    EmergencyStop,
}

/// A detected unpleasant motion covering frames `start..=end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MotionEvent {
    pub kind: MotionEventKind,
    pub start: usize,
    pub end: usize,
}

/// Causal detector fed one frame at a time. Cloning it snapshots the state,
/// which the streaming evaluator uses for provisional tails.
#[derive(Debug, Clone)]
pub struct MotionEventDetector<T> {
    cp: ComfortParams<T>,
    index: usize,
    last_heading: Option<T>,
    unwrapped: T,
    /// (index, t, unwrapped heading) for frames eligible to start a U-turn.
    heading_window: std::collections::VecDeque<(usize, T, T)>,
    brake_run: Option<(usize, T)>,
    brake_event: Option<usize>,
    events: Vec<MotionEvent>,
}

impl<T: Scalar> MotionEventDetector<T> {
    pub fn new(cp: ComfortParams<T>) -> Self {
        MotionEventDetector {
            cp,
            index: 0,
            last_heading: None,
            unwrapped: T::zero(),
            heading_window: Default::default(),
            brake_run: None,
            brake_event: None,
            events: Vec::new(),
        }
    }

    pub fn events(&self) -> &[MotionEvent] {
        &self.events
    }

    pub fn frames_seen(&self) -> usize {
        self.index
    }

    pub fn push(&mut self, t: T, heading: T, accel_long: T) {
        let k = self.index;
        self.index += 1;

        self.unwrapped = match self.last_heading {
            None => heading,
            Some(prev) => self.unwrapped + wrap_angle(heading - prev),
        };
        self.last_heading = Some(heading);

        let window = self.cp.u_turn_window;
        while let Some(&(_, t0, _)) = self.heading_window.front() {
            if t - t0 > window {
                self.heading_window.pop_front();
            } else {
                break;
            }
        }
        let threshold = self.cp.u_turn_heading_change_deg.to_radians();
        let h = self.unwrapped;
        if let Some(&(j, _, _)) = self.heading_window.iter().rev().find(|(_, _, hj)| (h - *hj).abs() >= threshold) {
            self.events.push(MotionEvent { kind: MotionEventKind::UTurn, start: j, end: k });
            self.heading_window.clear();
        } else {
            self.heading_window.push_back((k, t, h));
        }

        if accel_long <= -self.cp.emergency_stop_decel {
            let (start, t_start) = *self.brake_run.get_or_insert((k, t));
            match self.brake_event {
                Some(e) => self.events[e].end = k,
                None if t - t_start >= self.cp.emergency_stop_min_duration => {
                    self.events.push(MotionEvent { kind: MotionEventKind::EmergencyStop, start, end: k });
                    self.brake_event = Some(self.events.len() - 1);
                }
                None => {}
            }
        } else {
            self.brake_run = None;
            self.brake_event = None;
        }
    }
}

pub fn event_penalty<T: Scalar>(kind: MotionEventKind, cp: &ComfortParams<T>) -> T {
    match kind {
        MotionEventKind::UTurn => cp.upm_penalties.u_turn,
        MotionEventKind::EmergencyStop => cp.upm_penalties.emergency_stop,
    }
}

pub fn detect_motion_events<T: Scalar>(case: &DrivingCase<T>, cp: &ComfortParams<T>) -> Vec<MotionEvent> {
    let mut det = MotionEventDetector::new(*cp);
    for f in &case.frames {
        det.push(f.t, f.ego.body.heading, f.ego.kin.accel_long);
    }
    det.events
}

/// Per-frame loss: each event adds its penalty on the frames it spans.
pub fn unpleasant_motion_loss<T: Scalar>(case: &DrivingCase<T>, cp: &ComfortParams<T>) -> Vec<T> {
    let mut loss = vec![T::zero(); case.frames.len()];
    for e in detect_motion_events(case, cp) {
        let p = event_penalty(e.kind, cp);
        for l in &mut loss[e.start..=e.end] {
            *l = *l + p;
        }
    }
    loss
}

/// Comfort integrand without the event penalties. The jerk term uses the
/// squared magnitude of the longitudinal and lateral jerk.
pub fn continuous_comfort<T: Scalar>(kin: &Kinematics<T>, speed: T, cp: &ComfortParams<T>) -> T {
    kin.yaw_rate.abs() * speed.abs() + cp.k * (kin.jerk_long * kin.jerk_long + kin.jerk_lat * kin.jerk_lat)
}

/// Comfort score. Kinematics must already be derived.
pub fn comfort_score<T: Scalar>(case: &DrivingCase<T>, cp: &ComfortParams<T>) -> Result<T> {
    let loss = unpleasant_motion_loss(case, cp);
    let values: Vec<T> = case
        .frames
        .iter()
        .zip(&loss)
        .map(|(f, &l)| continuous_comfort(&f.ego.kin, f.ego.body.speed, cp) + l)
        .collect();
    time_average(&case.times(), &values)
}
