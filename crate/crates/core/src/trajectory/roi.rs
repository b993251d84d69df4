use super::types::*;
use crate::scalar::Scalar;

/// True when `agent` lies within `[-rear, +front]` along the ego heading.
/// Lateral offset is unrestricted.
pub fn in_roi<T: Scalar>(ego: &Body<T>, agent: &Body<T>, roi: &RoiSpec<T>) -> bool {
    let (long, _) = ego.to_local(agent.x, agent.y);
    long >= -roi.rear && long <= roi.front
}

pub fn roi_filter<'a, T: Scalar>(frame: &'a SceneFrame<T>, roi: &RoiSpec<T>) -> Vec<&'a AgentState<T>> {
    frame.agents.iter().filter(|a| in_roi(&frame.ego.body, &a.body, roi)).collect()
}
