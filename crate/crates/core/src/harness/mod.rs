//! Synthetic scenarios, closed-loop planners and a rating oracle.

mod corpus;
mod idm;
mod oracle;
mod planner;
mod scenario;
mod sim;

pub use corpus::{corpus_spec, generate_corpus, planner_by_name, sampled_planner, CORPUS_PLANNERS};
pub use idm::{idm_accel, IdmParams, IDM_EXPONENT};
pub use oracle::{synthetic_rating_oracle, OracleParams, CRASH_RATING_MAX};
pub use planner::{
    follow_accel, follower_in_corridor, leader_in_corridor, ConstantAccelPlanner, Control, DrivingStyle, ErraticPlanner, GapAcceptancePlanner,
    IdmPlanner, Observation, Planner,
};
pub use scenario::{
    builtin_scenarios, generate_scenario, lane_y, place_agent, AgentInit, LaneChange, Longitudinal, ScenarioKind, ScenarioSpec,
    World, WorldAgent, EGO_LENGTH, EGO_MASS, EGO_WIDTH, LANE_WIDTH, MAX_SCENARIO_AGENTS, PLACEMENT_CLEARANCE,
};
pub use sim::{run_closed_loop, BLOWUP_SPEED, MAX_ACCEL, MAX_DECEL};
