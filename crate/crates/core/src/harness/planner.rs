//! Ego policies for closed-loop runs.

use super::idm::{idm_accel, IdmParams};
use super::scenario::{lane_y, LANE_WIDTH};
use crate::trajectory::{AgentState, Body};

/// What the ego planner sees each step.
#[derive(Debug, Clone, Copy)]
pub struct Observation<'a> {
    pub t: f64,
    pub ego: &'a Body<f64>,
    pub agents: &'a [AgentState<f64>],
    /// Speed limit of the current section (m/s).
    pub speed_limit: f64,
}

/// Longitudinal acceleration and the lane centerline to track.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Control {
    pub accel: f64,
    pub target_lane: i32,
}

pub trait Planner {
    fn name(&self) -> &str;
    fn control(&mut self, obs: &Observation) -> Control;
}

/// Closest vehicle ahead whose box laterally overlaps a corridor of the
/// given width centered on `y`: returns (bumper gap, leader speed).
pub fn leader_in_corridor(x: f64, y: f64, length: f64, width: f64, others: &[&Body<f64>]) -> Option<(f64, f64)> {
    others
        .iter()
        .filter(|o| o.x > x && (o.y - y).abs() < 0.5 * (width + o.width) + 0.25)
        .map(|o| (o.x - x - 0.5 * (length + o.length), o.v_long))
        .min_by(|a, b| a.0.total_cmp(&b.0))
}

/// Closest vehicle behind in the corridor: (bumper gap, follower speed).
pub fn follower_in_corridor(x: f64, y: f64, length: f64, width: f64, others: &[&Body<f64>]) -> Option<(f64, f64)> {
    others
        .iter()
        .filter(|o| o.x <= x && (o.y - y).abs() < 0.5 * (width + o.width) + 0.25)
        .map(|o| (x - o.x - 0.5 * (length + o.length), o.v_long))
        .min_by(|a, b| a.0.total_cmp(&b.0))
}

/// IDM acceleration with a non-positive gap treated as an imminent stop.
pub fn follow_accel(v: f64, leader: Option<(f64, f64)>, p: &IdmParams) -> f64 {
    match leader {
        Some((gap, lv)) => idm_accel(v, gap.max(0.01), v - lv, p).unwrap_or(-p.b_comf),
        None => idm_accel(v, f64::INFINITY, 0.0, p).unwrap_or(0.0),
    }
}

fn current_lane(y: f64) -> i32 {
    (y / LANE_WIDTH).round() as i32
}

/// Lane-keeping IDM driver with desired speed at the section limit.
#[derive(Debug, Clone)]
pub struct IdmPlanner {
    pub params: IdmParams,
    lane: Option<i32>,
}

impl IdmPlanner {
    pub fn new(params: IdmParams) -> Self {
        IdmPlanner { params, lane: None }
    }
}

impl Default for IdmPlanner {
    fn default() -> Self {
        Self::new(IdmParams::default())
    }
}

impl Planner for IdmPlanner {
    fn name(&self) -> &str {
        "idm"
    }

    fn control(&mut self, obs: &Observation) -> Control {
        let lane = *self.lane.get_or_insert(current_lane(obs.ego.y));
        let p = IdmParams { v0: obs.speed_limit, ..self.params };
        let others: Vec<&Body<f64>> = obs.agents.iter().map(|a| &a.body).collect();
        let e = obs.ego;
        let leader = leader_in_corridor(e.x, e.y, e.length, e.width, &others);
        Control { accel: follow_accel(e.v_long, leader, &p), target_lane: lane }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DrivingStyle {
    Conservative,
    Aggressive,
}

/// Gap-acceptance driver: IDM in lane plus lane changes when the current
/// leader is slow and the target lane has room.
#[derive(Debug, Clone)]
pub struct GapAcceptancePlanner {
    pub style: DrivingStyle,
    pub idm: IdmParams,
    /// Desired speed as a multiple of the limit.
    pub speed_factor: f64,
    /// Minimum free gap ahead / behind in the target lane (m).
    pub accept_front: f64,
    pub accept_rear: f64,
    /// Leader speed deficit that triggers a lane change (m/s).
    pub overtake_margin: f64,
    /// Minimum time between lane decisions (s).
    pub cooldown: f64,
    pub lanes: Vec<i32>,
    lane: Option<i32>,
    last_change: f64,
}

impl GapAcceptancePlanner {
    pub fn new(style: DrivingStyle) -> Self {
        let (idm, speed_factor, accept_front, accept_rear, overtake_margin) = match style {
            DrivingStyle::Conservative => (
                IdmParams { time_headway: 2.2, min_gap: 3.0, a_max: 1.0, b_comf: 1.5, ..IdmParams::default() },
                0.9,
                40.0,
                30.0,
                4.0,
            ),
            DrivingStyle::Aggressive => (
                IdmParams { time_headway: 0.8, min_gap: 1.5, a_max: 2.8, b_comf: 3.5, ..IdmParams::default() },
                1.15,
                10.0,
                6.0,
                1.0,
            ),
        };
        GapAcceptancePlanner {
            style,
            idm,
            speed_factor,
            accept_front,
            accept_rear,
            overtake_margin,
            cooldown: 3.0,
            lanes: vec![0, 1],
            lane: None,
            last_change: f64::NEG_INFINITY,
        }
    }
}

impl Planner for GapAcceptancePlanner {
    fn name(&self) -> &str {
        match self.style {
            DrivingStyle::Conservative => "conservative",
            DrivingStyle::Aggressive => "aggressive",
        }
    }

    fn control(&mut self, obs: &Observation) -> Control {
        let e = obs.ego;
        let mut lane = *self.lane.get_or_insert(current_lane(e.y));
        let v0 = obs.speed_limit * self.speed_factor;
        let p = IdmParams { v0, ..self.idm };
        let others: Vec<&Body<f64>> = obs.agents.iter().map(|a| &a.body).collect();
        let leader = leader_in_corridor(e.x, lane_y(lane), e.length, e.width, &others);

        let settled = (e.y - lane_y(lane)).abs() < 0.3;
        let blocked = leader.is_some_and(|(gap, lv)| gap < 60.0 && lv < v0 - self.overtake_margin);
        if settled && blocked && obs.t - self.last_change >= self.cooldown {
            let here = leader.map_or(f64::INFINITY, |l| l.1);
            for &cand in self.lanes.iter().filter(|&&l| l != lane) {
                let y = lane_y(cand);
                let ahead = leader_in_corridor(e.x, y, e.length, e.width, &others);
                let behind = follower_in_corridor(e.x, y, e.length, e.width, &others);
                let front_ok = ahead.is_none_or(|(gap, lv)| gap >= self.accept_front && lv > here);
                let rear_ok = behind.is_none_or(|(gap, _)| gap >= self.accept_rear);
                if front_ok && rear_ok {
                    lane = cand;
                    self.last_change = obs.t;
                    break;
                }
            }
            self.lane = Some(lane);
        }
        // Keep a gap to anything still ahead in the lane being left.
        let target = leader_in_corridor(e.x, lane_y(lane), e.length, e.width, &others);
        let current = leader_in_corridor(e.x, e.y, e.length, e.width, &others);
        let accel = follow_accel(e.v_long, target, &p).min(follow_accel(e.v_long, current, &p));
        Control { accel, target_lane: lane }
    }
}

/// Holds a constant acceleration and its lane whatever is ahead.
#[derive(Debug, Clone)]
pub struct ConstantAccelPlanner {
    pub accel: f64,
    lane: Option<i32>,
}

impl ConstantAccelPlanner {
    pub fn new(accel: f64) -> Self {
        ConstantAccelPlanner { accel, lane: None }
    }
}

impl Planner for ConstantAccelPlanner {
    fn name(&self) -> &str {
        "constant-accel"
    }

    fn control(&mut self, obs: &Observation) -> Control {
        let lane = *self.lane.get_or_insert(current_lane(obs.ego.y));
        Control { accel: self.accel, target_lane: lane }
    }
}

/// Gap-acceptance driving with a periodic throttle oscillation on top,
/// producing stop-and-go, jerky cases.
#[derive(Debug, Clone)]
pub struct ErraticPlanner {
    pub base: GapAcceptancePlanner,
    /// Oscillation amplitude (m/s^2) and period (s).
    pub amplitude: f64,
    pub period: f64,
    pub phase: f64,
}

impl Planner for ErraticPlanner {
    fn name(&self) -> &str {
        "erratic"
    }

    fn control(&mut self, obs: &Observation) -> Control {
        let base = self.base.control(obs);
        let wobble = self.amplitude * (std::f64::consts::TAU * obs.t / self.period + self.phase).sin();
        Control { accel: base.accel + wobble, ..base }
    }
}
