use serde::{Deserialize, Serialize};

use super::integrate::{crash_revision, integrate, SegmentWeights, WeightRow};
use super::segment::{classify_segment, Hyperplane, Level, LinearSvmModel};
use super::terms::{normalize, CalibrationTable, NormalizedScores, TermRange, TermScores};
use crate::error::Result;
use crate::experience::{comfort_score, efficiency_score, energy_score, ComfortParams, VehicleParams};
use crate::safety::{safety_score, DsfParams};
use crate::scalar::Scalar;
use crate::trajectory::{derive_kinematics, detect_crash, DrivingCase, RoadContext, SpeedLimits};

/// Physical model constants used to compute the raw terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, bound(deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct EvalParams<T> {
    pub dsf: DsfParams<T>,
    pub vehicle: VehicleParams<T>,
    pub comfort: ComfortParams<T>,
    /// Replaces the speed limits carried by the case when set.
    pub speed_limits: Option<SpeedLimits<T>>,
}

impl<T: Scalar> Default for EvalParams<T> {
    fn default() -> Self {
        EvalParams {
            dsf: DsfParams::default(),
            vehicle: VehicleParams::default(),
            comfort: ComfortParams::default(),
            speed_limits: None,
        }
    }
}

impl<T: Scalar> EvalParams<T> {
    pub fn validate(&self) -> Result<()> {
        self.dsf.validate()?;
        self.vehicle.validate()?;
        self.comfort.validate()
    }

    pub fn road_for(&self, case_road: &RoadContext<T>) -> RoadContext<T> {
        let mut road = *case_road;
        if let Some(limits) = self.speed_limits {
            road.speed_limits_kmh = limits;
        }
        road
    }
}

/// The fitted artifacts needed to turn raw terms into a score.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoringModel<T> {
    pub calibration: CalibrationTable<T>,
    pub classifier: LinearSvmModel<T>,
    pub weights: SegmentWeights<T>,
}

impl<T: Scalar> ScoringModel<T> {
    pub fn validate(&self) -> Result<()> {
        self.calibration.validate()?;
        self.classifier.validate()?;
        self.weights.validate()
    }

    /// Converts to another scalar type.
    pub fn cast<U: Scalar>(&self) -> ScoringModel<U> {
        let c = |v: T| U::lit(v.to_f64_lossy());
        let ranges = self.calibration.ranges().map(|r| TermRange { min: c(r.min), max: c(r.max) });
        let plane = |h: &Hyperplane<T>| Hyperplane { w: h.w.map(c), bias: c(h.bias) };
        let row = |r: &WeightRow<T>| WeightRow::from_array(r.to_array().map(c));
        ScoringModel {
            calibration: CalibrationTable::from_ranges(ranges),
            classifier: LinearSvmModel { low_mid: plane(&self.classifier.low_mid), mid_high: plane(&self.classifier.mid_high) },
            weights: SegmentWeights {
                low: row(&self.weights.low),
                mid: row(&self.weights.mid),
                high: row(&self.weights.high),
                offset: c(self.weights.offset),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport<T> {
    pub raw: TermScores<T>,
    pub normalized: NormalizedScores<T>,
    pub segment: Level,
    pub crash: bool,
    pub integrated: T,
    #[serde(rename = "final")]
    pub final_score: T,
}

/// Raw four-factor scores. Derives kinematics first.
pub fn raw_terms<T: Scalar>(case: &DrivingCase<T>, params: &EvalParams<T>) -> Result<TermScores<T>> {
    let case = derive_kinematics(case.clone())?;
    raw_terms_derived(&case, params)
}

pub(crate) fn raw_terms_derived<T: Scalar>(case: &DrivingCase<T>, params: &EvalParams<T>) -> Result<TermScores<T>> {
    let road = params.road_for(&case.road);
    Ok(TermScores {
        safety: safety_score(case, &params.dsf)?,
        efficiency: efficiency_score(case, &road)?,
        comfort: comfort_score(case, &params.comfort)?,
        energy: energy_score(case, &params.vehicle, &road)?,
    })
}

/// Normalize, classify, integrate and apply the crash veto.
pub fn score_terms<T: Scalar>(raw: TermScores<T>, crash: bool, model: &ScoringModel<T>) -> Result<EvaluationReport<T>> {
    let normalized = normalize(&raw, &model.calibration)?;
    let segment = classify_segment(&normalized, &model.classifier, crash);
    let integrated = integrate(&normalized, &model.weights, segment);
    Ok(EvaluationReport { raw, normalized, segment, crash, integrated, final_score: crash_revision(integrated, crash) })
}

pub fn evaluate_case<T: Scalar>(case: &DrivingCase<T>, params: &EvalParams<T>, model: &ScoringModel<T>) -> Result<EvaluationReport<T>> {
    let case = derive_kinematics(case.clone())?;
    let crash = case.crash || detect_crash(&case);
    let raw = raw_terms_derived(&case, params)?;
    score_terms(raw, crash, model)
}
