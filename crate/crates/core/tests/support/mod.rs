#![allow(dead_code)]

pub mod checks;
pub mod optimality;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use s2o_core::fitting::{GroundTruth, PreparedCase};
use s2o_core::pipeline::{normalize, CalibrationTable, Level, TermRange, TermScores};
use s2o_core::trajectory::*;

pub fn body(x: f64, y: f64, heading: f64, speed: f64) -> Body<f64> {
    Body::new(x, y, heading, speed, 4.5, 1.8, 1500.0)
}

pub fn car(id: &str, x: f64, y: f64, heading: f64, speed: f64) -> AgentState<f64> {
    AgentState { id: id.to_string(), kind: AgentKind::Car, body: body(x, y, heading, speed) }
}

pub fn frame(t: f64, ego: Body<f64>, agents: Vec<AgentState<f64>>) -> SceneFrame<f64> {
    SceneFrame { t, ego: EgoState { body: ego, section: RoadSection::UrbanRegular, kin: Kinematics::default() }, agents }
}

pub fn case(frames: Vec<SceneFrame<f64>>) -> DrivingCase<f64> {
    DrivingCase::new(frames, CaseMeta { scenario: "test".into(), driver: "test".into(), dt: 0.0 }, RoadContext::default())
        .expect("valid test case")
}

/// Ego driving along +x with speed `v(t)`, positions integrated exactly
/// by the midpoint rule at each step.
pub fn straight_case(dt: f64, duration: f64, v: impl Fn(f64) -> f64) -> DrivingCase<f64> {
    let n = (duration / dt).round() as usize;
    let mut x = 0.0;
    let mut frames = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let t = i as f64 * dt;
        if i > 0 {
            x += 0.5 * (v(t - dt) + v(t)) * dt;
        }
        frames.push(frame(t, body(x, 0.0, 0.0, v(t)), vec![]));
    }
    case(frames)
}

/// Left-endpoint rectangle rule on a fine grid, the independent check for
/// the trapezoidal time averages.
pub fn fine_average(f: impl Fn(f64) -> f64, t0: f64, t1: f64, steps: usize) -> f64 {
    let h = (t1 - t0) / steps as f64;
    (0..steps).map(|i| f(t0 + (i as f64 + 0.5) * h)).sum::<f64>() * h / (t1 - t0)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Raw terms on an 11-point grid per term, so the extremes recur often
/// enough that every 80% split contains them.
pub fn grid_raw(rng: &mut ChaCha8Rng) -> TermScores<f64> {
    let scales = [2.0, 1.0, 3.0, 20.0];
    TermScores::from_array(scales.map(|s| s * rng.gen_range(0..=10) as f64 / 10.0))
}

pub fn grid_calibration() -> CalibrationTable<f64> {
    let r = |max| TermRange { min: 0.0, max };
    CalibrationTable::from_ranges([r(2.0), r(1.0), r(3.0), r(20.0)])
}

/// One weight row shared by every level, so the level choice never changes
/// the clean target.
pub const SHARED_ROW: [f64; 4] = [0.22, 0.31, 0.17, 0.2];
pub const SHARED_OFFSET: f64 = 12.0;

pub fn shared_linear_target(raw: &TermScores<f64>) -> f64 {
    let n = normalize(raw, &grid_calibration()).unwrap().to_array();
    SHARED_OFFSET + n.iter().zip(SHARED_ROW).map(|(x, w)| x * w).sum::<f64>()
}

/// Cases whose ground truth is the shared linear model plus `N(0, sigma)`.
pub fn linear_dataset(n: usize, sigma: f64, seed: u64) -> Vec<PreparedCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, sigma).unwrap();
    (0..n)
        .map(|i| {
            let raw = grid_raw(&mut rng);
            let eps = if sigma > 0.0 { noise.sample(&mut rng) } else { 0.0 };
            let score = (shared_linear_target(&raw) + eps).clamp(0.0, 100.0);
            PreparedCase {
                raw,
                crash: false,
                truth: GroundTruth { case_id: format!("lin{i}"), score, label: Level::from_score(score) },
            }
        })
        .collect()
}
