//! Incremental evaluation of a live frame feed.
//!
//! Frame `i`'s derived kinematics settle once frame `i + KINEMATIC_LAG` has
//! arrived. Panels between settled frames are folded into running sums; the
//! unsettled tail is recomputed on every frame and added on top in the same
//! order a batch pass would use, so each emission matches a batch evaluation
//! of the prefix.

use super::evaluate::{score_terms, EvalParams, EvaluationReport, ScoringModel};
use super::terms::TermScores;
use crate::error::{Error, Result};
use crate::experience::{continuous_comfort, event_penalty, instantaneous_efficiency, power_breakdown, MotionEventDetector};
use crate::quadrature::panel;
use crate::safety::ego_risk;
use crate::scalar::Scalar;
use crate::trajectory::{frame_collides, refresh_from, RoadContext, SceneFrame, SpeedSource, KINEMATIC_LAG};

#[derive(Debug, Clone, Copy, Default)]
struct Integrand<T> {
    risk: T,
    efficiency: T,
    comfort: T,
    energy: T,
}

#[derive(Debug, Clone, Copy, Default)]
struct Sums<T> {
    risk: T,
    efficiency: T,
    comfort: T,
    energy: T,
}

impl<T: Scalar> Sums<T> {
    fn add_panel(&mut self, t0: T, a: &Integrand<T>, t1: T, b: &Integrand<T>) {
        self.risk = self.risk + panel(t0, a.risk, t1, b.risk);
        self.efficiency = self.efficiency + panel(t0, a.efficiency, t1, b.efficiency);
        self.comfort = self.comfort + panel(t0, a.comfort, t1, b.comfort);
        self.energy = self.energy + panel(t0, a.energy, t1, b.energy);
    }
}

/// One emission of the streaming evaluator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamReport<T> {
    /// Index of the newest frame.
    pub frame: usize,
    pub t: T,
    pub report: EvaluationReport<T>,
}

pub struct StreamEvaluator<T> {
    params: EvalParams<T>,
    model: ScoringModel<T>,
    road: RoadContext<T>,
    speed_source: SpeedSource,
    /// Ego-only copies of every frame received.
    frames: Vec<SceneFrame<T>>,
    risks: Vec<T>,
    settled: Vec<Integrand<T>>,
    settled_sums: Sums<T>,
    detector: MotionEventDetector<T>,
    crash: bool,
}

impl<T: Scalar> StreamEvaluator<T> {
    pub fn new(params: EvalParams<T>, model: ScoringModel<T>, road: RoadContext<T>) -> Self {
        let road = params.road_for(&road);
        StreamEvaluator {
            detector: MotionEventDetector::new(params.comfort),
            params,
            model,
            road,
            speed_source: SpeedSource::Logged,
            frames: Vec::new(),
            risks: Vec::new(),
            settled: Vec::new(),
            settled_sums: Sums::default(),
            crash: false,
        }
    }

    /// Rebuild ego speed from positions instead of trusting logged speed.
    pub fn with_speed_source(mut self, source: SpeedSource) -> Self {
        self.speed_source = source;
        self
    }

    /// Marks the stream as crashed regardless of geometry.
    pub fn set_crash(&mut self, crash: bool) {
        self.crash |= crash;
    }

    pub fn frames_seen(&self) -> usize {
        self.frames.len()
    }

    fn integrand(&self, i: usize) -> Result<Integrand<T>> {
        let f = &self.frames[i];
        let v_lim = self.road.speed_limits_kmh.mps(f.ego.section);
        Ok(Integrand {
            risk: self.risks[i],
            efficiency: instantaneous_efficiency(f.ego.body.speed, v_lim)?,
            comfort: continuous_comfort(&f.ego.kin, f.ego.body.speed, &self.params.comfort),
            energy: power_breakdown(&f.ego, &self.params.vehicle, &self.road).total,
        })
    }

    /// Feeds one frame. Returns `None` until two frames have been seen.
    pub fn push(&mut self, frame: SceneFrame<T>) -> Result<Option<StreamReport<T>>> {
        frame.validate().map_err(|e| Error::Stream(e.to_string()))?;
        if let Some(last) = self.frames.last() {
            if !(frame.t > last.t) {
                return Err(Error::Stream(format!("frame at t={} is not after t={}", frame.t, last.t)));
            }
        }
        let risk = ego_risk(&frame, &self.params.dsf).map_err(|e| Error::Stream(e.to_string()))?;
        self.crash |= frame_collides(&frame);
        let mut ego_only = frame;
        ego_only.agents = Vec::new();
        self.frames.push(ego_only);
        self.risks.push(risk);

        let n = self.frames.len();
        if n < 2 {
            return Ok(None);
        }
        refresh_from(&mut self.frames, n.saturating_sub(KINEMATIC_LAG + 1), self.speed_source)?;

        // Settle frames whose kinematics can no longer change.
        let settled_target = n.saturating_sub(KINEMATIC_LAG);
        while self.settled.len() < settled_target {
            let i = self.settled.len();
            let g = self.integrand(i)?;
            if i > 0 {
                let prev = self.settled[i - 1];
                self.settled_sums.add_panel(self.frames[i - 1].t, &prev, self.frames[i].t, &g);
            }
            let f = &self.frames[i];
            self.detector.push(f.t, f.ego.body.heading, f.ego.kin.accel_long);
            self.settled.push(g);
        }

        // Provisional tail.
        let first = self.settled.len();
        let mut sums = self.settled_sums;
        let mut detector = self.detector.clone();
        let mut prev = if first > 0 { Some(self.settled[first - 1]) } else { None };
        for i in first..n {
            let g = self.integrand(i)?;
            if let Some(p) = prev {
                sums.add_panel(self.frames[i - 1].t, &p, self.frames[i].t, &g);
            }
            let f = &self.frames[i];
            detector.push(f.t, f.ego.body.heading, f.ego.kin.accel_long);
            prev = Some(g);
        }

        // Event penalties: trapezoid of each event's indicator over the prefix.
        let mut loss = T::zero();
        let t = |i: usize| self.frames[i].t;
        for e in detector.events() {
            let mut span = t(e.end) - t(e.start);
            if e.start > 0 {
                span = span + (t(e.start) - t(e.start - 1)) * T::lit(0.5);
            }
            if e.end + 1 < n {
                span = span + (t(e.end + 1) - t(e.end)) * T::lit(0.5);
            }
            loss = loss + event_penalty(e.kind, &self.params.comfort) * span;
        }

        let duration = t(n - 1) - t(0);
        let raw = TermScores {
            safety: sums.risk / duration,
            efficiency: sums.efficiency / duration,
            comfort: (sums.comfort + loss) / duration,
            energy: sums.energy / duration,
        };
        let report = score_terms(raw, self.crash, &self.model)?;
        Ok(Some(StreamReport { frame: n - 1, t: t(n - 1), report }))
    }
}
