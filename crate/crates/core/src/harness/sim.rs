//! Forward-Euler closed-loop simulation of an ego planner among scripted or
//! IDM-driven agents.

use super::planner::{follow_accel, follower_in_corridor, leader_in_corridor, Control, Observation, Planner};
use super::scenario::{lane_y, LaneChange, Longitudinal, World};
use crate::error::{Error, Result};
use crate::trajectory::{detect_crash, frame_collides, AgentState, Body, CaseMeta, DrivingCase, EgoState, Kinematics, SceneFrame};

/// Speeds above this abort the run (m/s).
pub const BLOWUP_SPEED: f64 = 200.0;
/// Physical deceleration floor applied to every vehicle (m/s^2).
pub const MAX_DECEL: f64 = 9.0;
/// Acceleration ceiling applied to the ego (m/s^2).
pub const MAX_ACCEL: f64 = 6.0;

const LATERAL_GAIN: f64 = 0.5;
const HEADING_LIMIT: f64 = 0.25;
const HEADING_TAU: f64 = 0.5;
const YAW_RATE_LIMIT: f64 = 0.5;

fn smoothstep(u: f64) -> (f64, f64) {
    let u = u.clamp(0.0, 1.0);
    (u * u * (3.0 - 2.0 * u), 6.0 * u * (1.0 - u))
}

// Behaviour stays outside `AgentState` so recorded frames carry only logged fields.
struct AgentSim {
    state: AgentState<f64>,
    road_speed: f64,
    y0: f64,
    longitudinal: Longitudinal,
    lane_change: Option<LaneChange>,
    lane_change_start: Option<f64>,
}

/// Scripted lane changes wait until the target lane has this much room.
fn lane_change_clear(b: &Body<f64>, v: f64, target_y: f64, others: &[&Body<f64>]) -> bool {
    let ahead = leader_in_corridor(b.x, target_y, b.length, b.width, others);
    let behind = follower_in_corridor(b.x, target_y, b.length, b.width, others);
    ahead.is_none_or(|(gap, _)| gap >= 5.0 + 0.5 * v) && behind.is_none_or(|(gap, fv)| gap >= 5.0 + 0.8 * fv.max(v))
}

fn agent_states(agents: &[AgentSim]) -> Vec<AgentState<f64>> {
    agents.iter().map(|a| a.state.clone()).collect()
}

fn ego_frame(t: f64, ego: &Body<f64>, world: &World, agents: &[AgentSim]) -> SceneFrame<f64> {
    SceneFrame { t, ego: EgoState { body: *ego, section: world.section, kin: Kinematics::default() }, agents: agent_states(agents) }
}

fn step_agents(agents: &mut [AgentSim], ego: &Body<f64>, t: f64, dt: f64) {
    let bodies: Vec<Body<f64>> = agents.iter().map(|a| a.state.body).collect();
    for (i, a) in agents.iter_mut().enumerate() {
        let b = a.state.body;
        let v = a.road_speed;
        let accel = match a.longitudinal {
            Longitudinal::Constant => 0.0,
            Longitudinal::Idm(p) => {
                let mut others: Vec<&Body<f64>> = bodies.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, o)| o).collect();
                others.push(ego);
                follow_accel(v, leader_in_corridor(b.x, b.y, b.length, b.width, &others), &p)
            }
            Longitudinal::Brake { at, decel, min_speed } => {
                if t >= at && v > min_speed {
                    -decel.min((v - min_speed) / dt)
                } else {
                    0.0
                }
            }
        }
        .max(-MAX_DECEL);

        if let (Some(lc), None) = (a.lane_change, a.lane_change_start) {
            if t >= lc.at {
                let mut others: Vec<&Body<f64>> = bodies.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, o)| o).collect();
                others.push(ego);
                if lane_change_clear(&b, v, lane_y(lc.to_lane), &others) {
                    a.lane_change_start = Some(t);
                }
            }
        }
        let x = b.x + v * dt;
        let v_next = (v + accel * dt).max(0.0);
        let (y, vy) = match (a.lane_change, a.lane_change_start) {
            (Some(lc), Some(start)) => {
                let target = lane_y(lc.to_lane);
                let (s, ds) = smoothstep((t + dt - start) / lc.duration);
                (a.y0 + (target - a.y0) * s, (target - a.y0) * ds / lc.duration)
            }
            _ => (b.y, 0.0),
        };
        let heading = if v_next > 0.0 || vy != 0.0 { vy.atan2(v_next) } else { b.heading };
        let speed = v_next.hypot(vy);
        a.road_speed = v_next;
        a.state.body = Body { x, y, heading, speed, v_long: speed, ..b };
    }
}

fn step_ego(ego: &Body<f64>, control: &Control, dt: f64) -> Body<f64> {
    let accel = control.accel.clamp(-MAX_DECEL, MAX_ACCEL);
    let v = ego.speed;
    let lateral_error = lane_y(control.target_lane) - ego.y;
    let heading_cmd = (LATERAL_GAIN * lateral_error).atan2(v.max(1.0)).clamp(-HEADING_LIMIT, HEADING_LIMIT);
    let yaw_rate = ((heading_cmd - ego.heading) / HEADING_TAU).clamp(-YAW_RATE_LIMIT, YAW_RATE_LIMIT);
    let speed = (v + accel * dt).max(0.0);
    Body {
        x: ego.x + v * ego.heading.cos() * dt,
        y: ego.y + v * ego.heading.sin() * dt,
        heading: ego.heading + yaw_rate * dt,
        speed,
        v_long: speed,
        ..*ego
    }
}

/// Runs the planner for `duration` seconds at step `dt`, stopping early at
/// the first collision. The returned case has its crash flag set.
pub fn run_closed_loop(world: &World, planner: &mut dyn Planner, dt: f64, duration: f64) -> Result<DrivingCase<f64>> {
    if !(dt > 0.0 && duration >= dt) {
        return Err(Error::Simulation(format!("need 0 < dt <= duration, got dt {dt} duration {duration}")));
    }
    let steps = (duration / dt).round() as usize;
    let limit = world.speed_limit();
    let mut ego = world.ego;
    let mut agents: Vec<AgentSim> = world
        .agents
        .iter()
        .map(|a| AgentSim {
            state: AgentState { id: a.id.clone(), kind: a.kind, body: a.body },
            road_speed: a.body.speed,
            y0: a.body.y,
            longitudinal: a.longitudinal,
            lane_change: a.lane_change,
            lane_change_start: None,
        })
        .collect();

    let mut frames = Vec::with_capacity(steps + 1);
    frames.push(ego_frame(0.0, &ego, world, &agents));
    for k in 0..steps {
        let t = k as f64 * dt;
        let states = agent_states(&agents);
        let control = planner.control(&Observation { t, ego: &ego, agents: &states, speed_limit: limit });
        if !control.accel.is_finite() {
            return Err(Error::Simulation(format!("planner {} returned a non-finite acceleration at t = {t}", planner.name())));
        }
        let next_ego = step_ego(&ego, &control, dt);
        step_agents(&mut agents, &ego, t, dt);
        ego = next_ego;
        if ego.speed > BLOWUP_SPEED || agents.iter().any(|a| a.state.body.speed > BLOWUP_SPEED) {
            return Err(Error::Simulation(format!("speed exceeded {BLOWUP_SPEED} m/s at t = {}", t + dt)));
        }
        let frame = ego_frame((k + 1) as f64 * dt, &ego, world, &agents);
        let hit = frame_collides(&frame);
        frames.push(frame);
        if hit {
            break;
        }
    }

    let meta = CaseMeta { scenario: world.name.clone(), driver: planner.name().to_string(), dt };
    let mut case = DrivingCase::new(frames, meta, world.road)?;
    case.crash = detect_crash(&case);
    Ok(case)
}
