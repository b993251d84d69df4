use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentKind {
    Car,
    Truck,
    Bus,
    Pedestrian,
    Cyclist,
}

impl AgentKind {
    /// Mass used when a log omits it (kg).
    pub fn default_mass(self) -> f64 {
        match self {
            AgentKind::Car => 1500.0,
            AgentKind::Truck => 10_000.0,
            AgentKind::Bus => 12_000.0,
            AgentKind::Pedestrian => 75.0,
            AgentKind::Cyclist => 90.0,
        }
    }
}

/// Road section types with their legal speed limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoadSection {
    UrbanRegular,
    UrbanIntersection,
    HighwaySlow,
    HighwayExpress,
}

impl RoadSection {
    pub const ALL: [RoadSection; 4] = [
        RoadSection::UrbanRegular,
        RoadSection::UrbanIntersection,
        RoadSection::HighwaySlow,
        RoadSection::HighwayExpress,
    ];

    /// Default speed limit in km/h.
    pub fn default_limit_kmh(self) -> f64 {
        match self {
            RoadSection::UrbanRegular => 60.0,
            RoadSection::UrbanIntersection => 30.0,
            RoadSection::HighwaySlow => 80.0,
            RoadSection::HighwayExpress => 120.0,
        }
    }
}

/// Rigid body shared by the ego and the surrounding agents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Body<T> {
    pub x: T,
    pub y: T,
    /// Yaw (rad).
    pub heading: T,
    /// Velocity magnitude (m/s).
    pub speed: T,
    /// Longitudinal velocity in the body's own frame (m/s).
    pub v_long: T,
    pub length: T,
    pub width: T,
    pub mass: T,
}

impl<T: Scalar> Body<T> {
    pub fn new(x: T, y: T, heading: T, speed: T, length: T, width: T, mass: T) -> Self {
        Body { x, y, heading, speed, v_long: speed, length, width, mass }
    }

    pub fn velocity(&self) -> (T, T) {
        (self.speed * self.heading.cos(), self.speed * self.heading.sin())
    }

    /// Offset of `(px, py)` expressed in this body's frame: (longitudinal, lateral).
    pub fn to_local(&self, px: T, py: T) -> (T, T) {
        let (s, c) = self.heading.sin_cos();
        let dx = px - self.x;
        let dy = py - self.y;
        (dx * c + dy * s, -dx * s + dy * c)
    }

    pub fn validate(&self, what: &str) -> Result<()> {
        let fields = [self.x, self.y, self.heading, self.speed, self.v_long, self.length, self.width, self.mass];
        if fields.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation(format!("{what}: non-finite state")));
        }
        if self.length <= T::zero() || self.width <= T::zero() {
            return Err(Error::Validation(format!("{what}: box extents must be positive")));
        }
        if self.mass <= T::zero() {
            return Err(Error::Validation(format!("{what}: mass must be positive")));
        }
        if self.speed < T::zero() {
            return Err(Error::Validation(format!("{what}: negative speed")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentState<T> {
    pub id: String,
    pub kind: AgentKind,
    pub body: Body<T>,
}

/// Quantities derived from the trajectory by finite differences.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Kinematics<T> {
    pub accel_long: T,
    pub accel_lat: T,
    pub jerk_long: T,
    pub jerk_lat: T,
    pub yaw_rate: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EgoState<T> {
    pub body: Body<T>,
    pub section: RoadSection,
    pub kin: Kinematics<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneFrame<T> {
    pub t: T,
    pub ego: EgoState<T>,
    pub agents: Vec<AgentState<T>>,
}

impl<T: Scalar> SceneFrame<T> {
    pub fn validate(&self) -> Result<()> {
        if !self.t.is_finite() {
            return Err(Error::Validation("non-finite timestamp".into()));
        }
        self.ego.body.validate("ego")?;
        let mut seen = HashSet::with_capacity(self.agents.len());
        for a in &self.agents {
            if !seen.insert(a.id.as_str()) {
                return Err(Error::Validation(format!("duplicate agent id {:?} at t={}", a.id, self.t)));
            }
            a.body.validate(&format!("agent {}", a.id))?;
        }
        Ok(())
    }
}

/// Speed limits per section, km/h.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, bound(deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct SpeedLimits<T> {
    pub urban_regular: T,
    pub urban_intersection: T,
    pub highway_slow: T,
    pub highway_express: T,
}

impl<T: Scalar> Default for SpeedLimits<T> {
    fn default() -> Self {
        SpeedLimits {
            urban_regular: T::lit(RoadSection::UrbanRegular.default_limit_kmh()),
            urban_intersection: T::lit(RoadSection::UrbanIntersection.default_limit_kmh()),
            highway_slow: T::lit(RoadSection::HighwaySlow.default_limit_kmh()),
            highway_express: T::lit(RoadSection::HighwayExpress.default_limit_kmh()),
        }
    }
}

impl<T: Scalar> SpeedLimits<T> {
    pub fn kmh(&self, section: RoadSection) -> T {
        match section {
            RoadSection::UrbanRegular => self.urban_regular,
            RoadSection::UrbanIntersection => self.urban_intersection,
            RoadSection::HighwaySlow => self.highway_slow,
            RoadSection::HighwayExpress => self.highway_express,
        }
    }

    pub fn mps(&self, section: RoadSection) -> T {
        self.kmh(section) / T::lit(3.6)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, bound(deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct RoadContext<T> {
    pub speed_limits_kmh: SpeedLimits<T>,
    /// Rise over run.
    pub gradient: T,
    pub rolling_coeff: T,
}

impl<T: Scalar> Default for RoadContext<T> {
    fn default() -> Self {
        RoadContext { speed_limits_kmh: SpeedLimits::default(), gradient: T::zero(), rolling_coeff: T::lit(0.015) }
    }
}

impl<T: Scalar> RoadContext<T> {
    pub fn validate(&self) -> Result<()> {
        for s in RoadSection::ALL {
            let v = self.speed_limits_kmh.kmh(s);
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::InvalidParam(format!("speed limit for {s:?} must be positive")));
            }
        }
        if !(self.rolling_coeff >= T::zero()) {
            return Err(Error::InvalidParam("rolling coefficient must be >= 0".into()));
        }
        if !(self.gradient.abs() < T::one()) {
            return Err(Error::InvalidParam("|gradient| must be < 1".into()));
        }
        Ok(())
    }
}

/// Where the ego speed came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpeedSource {
    #[default]
    Logged,
    /// Speed is reconstructed from positions during kinematic derivation.
    Positions,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CaseMeta<T> {
    pub scenario: String,
    pub driver: String,
    /// Sample period (s).
    pub dt: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DrivingCase<T> {
    pub frames: Vec<SceneFrame<T>>,
    pub crash: bool,
    pub meta: CaseMeta<T>,
    pub road: RoadContext<T>,
    pub speed_source: SpeedSource,
}

impl<T: Scalar> DrivingCase<T> {
    /// Builds a case, checking frame ordering and state invariants. `dt` is
    /// set to the median timestamp gap.
    pub fn new(frames: Vec<SceneFrame<T>>, meta: CaseMeta<T>, road: RoadContext<T>) -> Result<Self> {
        if frames.len() < 2 {
            return Err(Error::Validation("fewer than 2 frames".into()));
        }
        for f in &frames {
            f.validate()?;
        }
        for w in frames.windows(2) {
            if !(w[1].t > w[0].t) {
                return Err(Error::Validation(format!(
                    "timestamps must be strictly increasing ({} then {})",
                    w[0].t, w[1].t
                )));
            }
        }
        road.validate()?;
        let mut meta = meta;
        meta.dt = median_gap(&frames);
        Ok(DrivingCase { frames, crash: false, meta, road, speed_source: SpeedSource::Logged })
    }

    pub fn start_time(&self) -> T {
        self.frames[0].t
    }

    pub fn end_time(&self) -> T {
        self.frames[self.frames.len() - 1].t
    }

    pub fn duration(&self) -> T {
        self.end_time() - self.start_time()
    }

    pub fn times(&self) -> Vec<T> {
        self.frames.iter().map(|f| f.t).collect()
    }

    /// Converts to another scalar type.
    pub fn cast<U: Scalar>(&self) -> DrivingCase<U> {
        let c = |v: T| U::lit(v.to_f64_lossy());
        let body = |b: &Body<T>| Body {
            x: c(b.x),
            y: c(b.y),
            heading: c(b.heading),
            speed: c(b.speed),
            v_long: c(b.v_long),
            length: c(b.length),
            width: c(b.width),
            mass: c(b.mass),
        };
        let frames = self
            .frames
            .iter()
            .map(|f| SceneFrame {
                t: c(f.t),
                ego: EgoState {
                    body: body(&f.ego.body),
                    section: f.ego.section,
                    kin: Kinematics {
                        accel_long: c(f.ego.kin.accel_long),
                        accel_lat: c(f.ego.kin.accel_lat),
                        jerk_long: c(f.ego.kin.jerk_long),
                        jerk_lat: c(f.ego.kin.jerk_lat),
                        yaw_rate: c(f.ego.kin.yaw_rate),
                    },
                },
                agents: f
                    .agents
                    .iter()
                    .map(|a| AgentState { id: a.id.clone(), kind: a.kind, body: body(&a.body) })
                    .collect(),
            })
            .collect();
        let l = &self.road.speed_limits_kmh;
        DrivingCase {
            frames,
            crash: self.crash,
            meta: CaseMeta { scenario: self.meta.scenario.clone(), driver: self.meta.driver.clone(), dt: c(self.meta.dt) },
            road: RoadContext {
                speed_limits_kmh: SpeedLimits {
                    urban_regular: c(l.urban_regular),
                    urban_intersection: c(l.urban_intersection),
                    highway_slow: c(l.highway_slow),
                    highway_express: c(l.highway_express),
                },
                gradient: c(self.road.gradient),
                rolling_coeff: c(self.road.rolling_coeff),
            },
            speed_source: self.speed_source,
        }
    }
}

pub(crate) fn median_gap<T: Scalar>(frames: &[SceneFrame<T>]) -> T {
    let mut gaps: Vec<T> = frames.windows(2).map(|w| w[1].t - w[0].t).collect();
    gaps.sort_by(|a, b| a.partial_cmp(b).expect("finite gaps"));
    let n = gaps.len();
    if n % 2 == 1 {
        gaps[n / 2]
    } else {
        (gaps[n / 2 - 1] + gaps[n / 2]) * T::lit(0.5)
    }
}

/// Region of interest around the ego, metres along its heading.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, bound(deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct RoiSpec<T> {
    pub front: T,
    pub rear: T,
}

impl<T: Scalar> Default for RoiSpec<T> {
    fn default() -> Self {
        RoiSpec { front: T::lit(100.0), rear: T::lit(50.0) }
    }
}

impl<T: Scalar> RoiSpec<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.front > T::zero() && self.rear > T::zero()) {
            return Err(Error::InvalidParam("ROI extents must be positive".into()));
        }
        Ok(())
    }
}
