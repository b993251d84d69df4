use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::time_average;
use crate::scalar::Scalar;
use crate::trajectory::{in_roi, AgentState, Body, DrivingCase, RoiSpec, SceneFrame};

/// Largest exponent fed to `exp` in the kinetic term.
pub const MAX_CLOSING_EXPONENT: f64 = 50.0;

/// Field constants.
///
/// `risk = (g * m_eq + k1 * exp(v_r cos(theta))) / r_eq^2` with
/// `m_eq = mass * (a * v_long^b + c)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, bound(deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct DsfParams<T> {
    pub g: T,
    pub k1: T,
    pub a: T,
    pub b: T,
    pub c: T,
    pub roi: RoiSpec<T>,
}

impl<T: Scalar> Default for DsfParams<T> {
    fn default() -> Self {
        DsfParams { g: T::lit(0.001), k1: T::one(), a: T::lit(0.05), b: T::one(), c: T::one(), roi: RoiSpec::default() }
    }
}

impl<T: Scalar> DsfParams<T> {
    pub fn validate(&self) -> Result<()> {
        let ok = self.g > T::zero() && self.k1 >= T::zero() && self.c > T::zero() && self.a >= T::zero() && self.b > T::zero();
        if !ok {
            return Err(Error::InvalidParam("field constants need g > 0, k1 >= 0, a >= 0, b > 0, c > 0".into()));
        }
        self.roi.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskSample<T> {
    pub agent_id: String,
    pub r_eq: T,
    pub m_eq: T,
    /// `v_r * cos(theta)`, positive when closing.
    pub closing_speed: T,
    pub risk: T,
}

/// Speed-scaled mass of the risk source.
pub fn virtual_mass<T: Scalar>(agent: &Body<T>, p: &DsfParams<T>) -> T {
    let v = agent.v_long.max(T::zero());
    agent.mass * (p.a * v.powf(p.b) + p.c)
}

/// Anisotropic distance in the ego heading frame; lateral offsets are scaled
/// by the agent's length/width ratio. `None` when the positions coincide.
pub fn equivalent_distance_raw<T: Scalar>(ego: &Body<T>, agent: &Body<T>) -> Option<T> {
    let (r_long, r_lat) = ego.to_local(agent.x, agent.y);
    let k_a = agent.length / agent.width;
    let r = (r_long * r_long + k_a * r_lat * r_lat).sqrt();
    (r > T::zero()).then_some(r)
}

pub fn equivalent_distance<T: Scalar>(ego: &Body<T>, agent: &AgentState<T>) -> Result<T> {
    equivalent_distance_raw(ego, &agent.body).ok_or_else(|| Error::DegenerateDistance(agent.id.clone()))
}

/// Relative speed projected on the ego-to-agent direction, positive when the
/// gap is shrinking.
pub fn closing_speed<T: Scalar>(ego: &Body<T>, agent: &Body<T>) -> T {
    let (dx, dy) = (agent.x - ego.x, agent.y - ego.y);
    let d = dx.hypot(dy);
    if d == T::zero() {
        return T::zero();
    }
    let (evx, evy) = ego.velocity();
    let (avx, avy) = agent.velocity();
    ((evx - avx) * dx + (evy - avy) * dy) / d
}

/// Risk given already-resolved field inputs.
pub fn risk_from_parts<T: Scalar>(m_eq: T, r_eq: T, closing: T, p: &DsfParams<T>) -> T {
    let kinetic = p.k1 * closing.min(T::lit(MAX_CLOSING_EXPONENT)).exp();
    (p.g * m_eq + kinetic) / (r_eq * r_eq)
}

pub fn agent_sample<T: Scalar>(ego: &Body<T>, agent: &AgentState<T>, p: &DsfParams<T>) -> Result<RiskSample<T>> {
    let r_eq = equivalent_distance(ego, agent)?;
    let m_eq = virtual_mass(&agent.body, p);
    let closing = closing_speed(ego, &agent.body);
    Ok(RiskSample { agent_id: agent.id.clone(), r_eq, m_eq, closing_speed: closing, risk: risk_from_parts(m_eq, r_eq, closing, p) })
}

pub fn agent_risk<T: Scalar>(ego: &Body<T>, agent: &AgentState<T>, p: &DsfParams<T>) -> Result<T> {
    agent_sample(ego, agent, p).map(|s| s.risk)
}

/// Per-agent samples for the agents inside the ROI.
pub fn risk_samples<T: Scalar>(frame: &SceneFrame<T>, p: &DsfParams<T>) -> Result<Vec<RiskSample<T>>> {
    let ego = &frame.ego.body;
    frame.agents.iter().filter(|a| in_roi(ego, &a.body, &p.roi)).map(|a| agent_sample(ego, a, p)).collect()
}

/// Superposed risk at the ego position.
pub fn ego_risk<T: Scalar>(frame: &SceneFrame<T>, p: &DsfParams<T>) -> Result<T> {
    let ego = &frame.ego.body;
    let mut total = T::zero();
    for a in frame.agents.iter().filter(|a| in_roi(ego, &a.body, &p.roi)) {
        total = total + agent_risk(ego, a, p)?;
    }
    Ok(total)
}

/// Time-averaged ego risk over the case.
pub fn safety_score<T: Scalar>(case: &DrivingCase<T>, p: &DsfParams<T>) -> Result<T> {
    let risks = case.frames.iter().map(|f| ego_risk(f, p)).collect::<Result<Vec<_>>>()?;
    time_average(&case.times(), &risks)
}
