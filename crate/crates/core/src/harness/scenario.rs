//! Scenario specifications and deterministic initial worlds on a straight
//! multi-lane road running along +x.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::idm::IdmParams;
use crate::error::{Error, Result};
use crate::trajectory::{boxes_overlap, AgentKind, Body, RoadContext, RoadSection};

/// Lane centerlines sit at `lane * LANE_WIDTH`; lane 0 is the ego's start lane.
pub const LANE_WIDTH: f64 = 3.5;
/// Longitudinal clearance enforced between initial placements (m).
pub const PLACEMENT_CLEARANCE: f64 = 5.0;
const PLACEMENT_ATTEMPTS: usize = 64;

pub const EGO_LENGTH: f64 = 4.8;
pub const EGO_WIDTH: f64 = 1.9;
pub const EGO_MASS: f64 = 1500.0;

pub fn lane_y(lane: i32) -> f64 {
    lane as f64 * LANE_WIDTH
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    CarFollowing,
    Overtake,
    Merge,
    MultiAgent,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::CarFollowing => "car-following",
            ScenarioKind::Overtake => "overtake",
            ScenarioKind::Merge => "merge",
            ScenarioKind::MultiAgent => "multi-agent",
        }
    }
}

/// Longitudinal behaviour of a surrounding agent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Longitudinal {
    Constant,
    Idm(IdmParams),
    /// Cruise, then brake at `decel` from time `at` until `min_speed`.
    Brake { at: f64, decel: f64, min_speed: f64 },
}

/// Scripted lateral move to another lane with a smooth profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaneChange {
    pub at: f64,
    pub to_lane: i32,
    pub duration: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentInit {
    #[serde(default = "default_kind")]
    pub kind: AgentKind,
    pub lane: i32,
    /// Longitudinal offset of the agent's center from the ego's center (m).
    pub offset: f64,
    pub speed: f64,
    #[serde(default = "default_longitudinal")]
    pub behaviour: Longitudinal,
    #[serde(default)]
    pub lane_change: Option<LaneChange>,
}

fn default_kind() -> AgentKind {
    AgentKind::Car
}

fn default_longitudinal() -> Longitudinal {
    Longitudinal::Constant
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    #[serde(default)]
    pub name: Option<String>,
    pub kind: ScenarioKind,
    /// Number of surrounding agents; ignored when `initial` is given.
    #[serde(default = "default_agents")]
    pub agents: usize,
    /// Simulated time (s).
    pub duration: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub section: Option<RoadSection>,
    /// Initial ego speed as a fraction of the section limit.
    #[serde(default)]
    pub ego_speed_factor: Option<f64>,
    /// Explicit agent placements instead of seeded random ones.
    #[serde(default)]
    pub initial: Vec<AgentInit>,
}

fn default_agents() -> usize {
    2
}

fn default_dt() -> f64 {
    0.1
}

pub const MAX_SCENARIO_AGENTS: usize = 4;

impl ScenarioSpec {
    pub fn new(kind: ScenarioKind, agents: usize, duration: f64, seed: u64) -> Self {
        ScenarioSpec {
            name: None,
            kind,
            agents,
            duration,
            dt: default_dt(),
            seed,
            section: None,
            ego_speed_factor: None,
            initial: Vec::new(),
        }
    }

    pub fn display_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("{}-{}", self.kind.name(), self.seed))
    }

    pub fn section(&self) -> RoadSection {
        self.section.unwrap_or(match self.kind {
            ScenarioKind::CarFollowing => RoadSection::UrbanRegular,
            ScenarioKind::Overtake => RoadSection::HighwaySlow,
            ScenarioKind::Merge => RoadSection::HighwaySlow,
            ScenarioKind::MultiAgent => RoadSection::UrbanRegular,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return Err(Error::Validation(format!("scenario duration must be positive, got {}", self.duration)));
        }
        if !(self.dt > 0.0 && self.dt < self.duration) {
            return Err(Error::Validation(format!("scenario dt must be in (0, duration), got {}", self.dt)));
        }
        let n = if self.initial.is_empty() { self.agents } else { self.initial.len() };
        if n == 0 || n > MAX_SCENARIO_AGENTS {
            return Err(Error::Validation(format!("scenario needs 1 to {MAX_SCENARIO_AGENTS} agents, got {n}")));
        }
        if let Some(f) = self.ego_speed_factor {
            if !(f >= 0.0 && f.is_finite()) {
                return Err(Error::Validation("ego_speed_factor must be non-negative".into()));
            }
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: ScenarioSpec = toml::from_str(text).map_err(|e| Error::Validation(format!("scenario spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldAgent {
    pub id: String,
    pub kind: AgentKind,
    pub body: Body<f64>,
    pub longitudinal: Longitudinal,
    pub lane_change: Option<LaneChange>,
}

/// Initial state of a closed-loop run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct World {
    pub name: String,
    pub section: RoadSection,
    pub road: RoadContext<f64>,
    pub ego: Body<f64>,
    pub agents: Vec<WorldAgent>,
    pub dt: f64,
    pub duration: f64,
}

impl World {
    pub fn speed_limit(&self) -> f64 {
        self.road.speed_limits_kmh.mps(self.section)
    }
}

fn agent_dims(kind: AgentKind) -> (f64, f64) {
    match kind {
        AgentKind::Car => (4.6, 1.85),
        AgentKind::Truck => (12.0, 2.5),
        AgentKind::Bus => (12.0, 2.55),
        AgentKind::Pedestrian => (0.5, 0.5),
        AgentKind::Cyclist => (1.8, 0.6),
    }
}

pub fn place_agent(id: usize, init: &AgentInit) -> WorldAgent {
    let (length, width) = agent_dims(init.kind);
    let body = Body::new(init.offset, lane_y(init.lane), 0.0, init.speed.max(0.0), length, width, init.kind.default_mass());
    WorldAgent { id: format!("a{id}"), kind: init.kind, body, longitudinal: init.behaviour, lane_change: init.lane_change }
}

fn inflated(b: &Body<f64>) -> Body<f64> {
    Body { length: b.length + PLACEMENT_CLEARANCE, ..*b }
}

fn placement_ok(ego: &Body<f64>, agents: &[WorldAgent]) -> bool {
    let mut bodies = vec![inflated(ego)];
    bodies.extend(agents.iter().map(|a| inflated(&a.body)));
    for i in 0..bodies.len() {
        for j in i + 1..bodies.len() {
            if boxes_overlap(&bodies[i], &bodies[j]) {
                return false;
            }
        }
    }
    true
}

fn random_layout(spec: &ScenarioSpec, limit: f64, ego_speed: f64, rng: &mut ChaCha8Rng) -> Vec<AgentInit> {
    let n = spec.agents;
    // Center offset for an agent of the given length placed a random time
    // headway ahead of the ego.
    let ahead = |rng: &mut ChaCha8Rng, length: f64, lo: f64, hi: f64| 0.5 * (EGO_LENGTH + length) + 4.0 + ego_speed * rng.gen_range(lo..hi);
    let mut out = Vec::with_capacity(n);
    let idm = |v0: f64| Longitudinal::Idm(IdmParams::with_v0(v0));
    let side_lanes = [1, -1];
    match spec.kind {
        ScenarioKind::CarFollowing => {
            let speed = limit * rng.gen_range(0.5..0.8);
            out.push(AgentInit {
                kind: AgentKind::Car,
                lane: 0,
                offset: ahead(rng, 4.6, 1.5, 3.0),
                speed,
                behaviour: Longitudinal::Brake {
                    at: rng.gen_range(8.0..12.0),
                    decel: rng.gen_range(2.5..5.0),
                    min_speed: speed * rng.gen_range(0.0..0.5),
                },
                lane_change: None,
            });
        }
        ScenarioKind::Overtake => {
            out.push(AgentInit {
                kind: AgentKind::Truck,
                lane: 0,
                offset: ahead(rng, 12.0, 1.5, 3.0),
                speed: limit * rng.gen_range(0.4..0.55),
                behaviour: Longitudinal::Constant,
                lane_change: None,
            });
        }
        ScenarioKind::Merge => {
            let speed = limit * rng.gen_range(0.65..0.85);
            out.push(AgentInit {
                kind: AgentKind::Car,
                lane: -1,
                offset: ahead(rng, 4.6, 0.3, 1.5),
                speed,
                behaviour: idm(speed),
                lane_change: Some(LaneChange { at: rng.gen_range(2.0..5.0), to_lane: 0, duration: 4.0 }),
            });
        }
        ScenarioKind::MultiAgent => {
            let speed = limit * rng.gen_range(0.6..0.8);
            out.push(AgentInit {
                kind: AgentKind::Car,
                lane: 0,
                offset: ahead(rng, 4.6, 2.0, 3.5),
                speed,
                behaviour: idm(speed),
                lane_change: None,
            });
            if n > 1 {
                let cut_speed = limit * rng.gen_range(0.55..0.75);
                out.push(AgentInit {
                    kind: AgentKind::Car,
                    lane: 1,
                    offset: ahead(rng, 4.6, 0.3, 1.0),
                    speed: cut_speed,
                    behaviour: idm(cut_speed),
                    lane_change: Some(LaneChange { at: rng.gen_range(3.0..6.0), to_lane: 0, duration: 3.0 }),
                });
            }
        }
    }
    while out.len() < n {
        let lane = side_lanes[out.len() % 2];
        let kind = if spec.kind == ScenarioKind::MultiAgent && out.len() == 2 { AgentKind::Cyclist } else { AgentKind::Car };
        let speed = match kind {
            AgentKind::Cyclist => rng.gen_range(3.0..6.0),
            _ => limit * rng.gen_range(0.7..1.0),
        };
        out.push(AgentInit {
            kind,
            lane,
            offset: rng.gen_range(-40.0..60.0),
            speed,
            behaviour: if kind == AgentKind::Cyclist { Longitudinal::Constant } else { idm(speed) },
            lane_change: None,
        });
    }
    out
}

/// Builds the initial world for a spec; the same spec always yields the
/// same world.
pub fn generate_scenario(spec: &ScenarioSpec) -> Result<World> {
    spec.validate()?;
    let section = spec.section();
    let road = RoadContext::default();
    let limit = road.speed_limits_kmh.mps(section);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let ego_speed = limit * spec.ego_speed_factor.unwrap_or_else(|| rng.gen_range(0.7..0.9));
    let ego = Body::new(0.0, 0.0, 0.0, ego_speed, EGO_LENGTH, EGO_WIDTH, EGO_MASS);

    let attempts = if spec.initial.is_empty() { PLACEMENT_ATTEMPTS } else { 1 };
    for _ in 0..attempts {
        let inits = if spec.initial.is_empty() { random_layout(spec, limit, ego_speed, &mut rng) } else { spec.initial.clone() };
        let agents: Vec<WorldAgent> = inits.iter().enumerate().map(|(i, a)| place_agent(i + 1, a)).collect();
        if placement_ok(&ego, &agents) {
            return Ok(World {
                name: spec.display_name(),
                section,
                road,
                ego,
                agents,
                dt: spec.dt,
                duration: spec.duration,
            });
        }
    }
    Err(Error::Simulation(format!("unsatisfiable placement for scenario {}", spec.display_name())))
}

/// The eight reference interaction scenes used for planner comparison.
pub fn builtin_scenarios() -> Vec<ScenarioSpec> {
    let mk = |name: &str, kind, agents, section, seed| ScenarioSpec {
        name: Some(name.to_string()),
        section: Some(section),
        ..ScenarioSpec::new(kind, agents, 30.0, seed)
    };
    vec![
        mk("follow-braking-leader", ScenarioKind::CarFollowing, 2, RoadSection::UrbanRegular, 11),
        mk("follow-slow-highway", ScenarioKind::CarFollowing, 3, RoadSection::HighwaySlow, 12),
        mk("overtake-truck", ScenarioKind::Overtake, 2, RoadSection::HighwaySlow, 13),
        mk("overtake-express", ScenarioKind::Overtake, 3, RoadSection::HighwayExpress, 14),
        mk("ramp-merge", ScenarioKind::Merge, 2, RoadSection::HighwaySlow, 15),
        mk("dense-merge", ScenarioKind::Merge, 4, RoadSection::UrbanRegular, 16),
        mk("cut-in", ScenarioKind::MultiAgent, 2, RoadSection::UrbanRegular, 17),
        mk("mixed-traffic", ScenarioKind::MultiAgent, 4, RoadSection::UrbanIntersection, 18),
    ]
}
