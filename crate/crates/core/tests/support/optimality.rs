//! Brute-force and perturbation checks on the weight fit, and the SVM
//! accuracy experiments.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use s2o_core::fitting::*;
use s2o_core::model::synthetic_level;
use s2o_core::pipeline::*;

pub const GRID_STEP: f64 = 0.005;
pub const GRID_MAX: f64 = 0.4;
pub const TOY_OFFSET: f64 = 10.0;

pub struct ToySegment {
    pub features: Vec<NormalizedScores<f64>>,
    pub targets: Vec<f64>,
}

/// 20 noisy cases from a row inside the search box.
pub fn toy_segment(seed: u64) -> ToySegment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, 2.0).unwrap();
    let row = [0.12, 0.05, 0.21, 0.08];
    let features: Vec<NormalizedScores<f64>> =
        (0..20).map(|_| NormalizedScores::from_array([(); 4].map(|_| rng.gen_range(60.0..=100.0)))).collect();
    let targets = features
        .iter()
        .map(|f| TOY_OFFSET + f.to_array().iter().zip(row).map(|(x, w)| x * w).sum::<f64>() + noise.sample(&mut rng))
        .collect();
    ToySegment { features, targets }
}

pub fn segment_mae(seg: &ToySegment, w: [f64; 4]) -> f64 {
    seg.features
        .iter()
        .zip(&seg.targets)
        .map(|(f, t)| {
            let x = f.to_array();
            (TOY_OFFSET + w[0] * x[0] + w[1] * x[1] + w[2] * x[2] + w[3] * x[3] - t).abs()
        })
        .sum::<f64>()
        / seg.targets.len() as f64
}

pub struct GridOutcome {
    pub lp_weights: [f64; 4],
    pub lp_mae: f64,
    pub grid_weights: [f64; 4],
    pub grid_mae: f64,
}

/// Exhaustive search over `[0, 0.4]^4` at 0.005 spacing, offset held at the
/// LP's value.
pub fn grid_search(seg: &ToySegment) -> GridOutcome {
    let lp = fit_segment_fixed_offset(&seg.features, &seg.targets, TOY_OFFSET).unwrap().to_array();
    let steps = (GRID_MAX / GRID_STEP).round() as usize;
    let at = |i: usize| i as f64 * GRID_STEP;
    let (grid_mae, grid_weights) = (0..=steps)
        .into_par_iter()
        .map(|i| {
            let mut best = (f64::INFINITY, [0.0; 4]);
            for j in 0..=steps {
                for k in 0..=steps {
                    for l in 0..=steps {
                        let w = [at(i), at(j), at(k), at(l)];
                        let m = segment_mae(seg, w);
                        if m < best.0 {
                            best = (m, w);
                        }
                    }
                }
            }
            best
        })
        .reduce(|| (f64::INFINITY, [0.0; 4]), |a, b| if b.0 < a.0 { b } else { a });
    GridOutcome { lp_weights: lp, lp_mae: segment_mae(seg, lp), grid_weights, grid_mae }
}

/// Largest decrease of training MAE found by moving any single parameter
/// (weights projected to >= 0, and the offset) by +/- `delta`. Non-positive
/// means no move helped.
pub fn best_perturbation_gain(samples: &[FitSample], w: &SegmentWeights<f64>, delta: f64) -> f64 {
    let base = mae(samples, w);
    let mut gain = f64::NEG_INFINITY;
    for level in Level::ALL {
        for k in 0..4 {
            for s in [-delta, delta] {
                let mut p = *w;
                let mut row = p.row(level).to_array();
                row[k] = (row[k] + s).max(0.0);
                *p.row_mut(level) = WeightRow::from_array(row);
                gain = gain.max(base - mae(samples, &p));
            }
        }
    }
    for s in [-delta, delta] {
        let mut p = *w;
        p.offset += s;
        gain = gain.max(base - mae(samples, &p));
    }
    gain
}

/// Noisy samples around the reference rows with levels taken from the
/// target thresholds.
pub fn noisy_reference_samples(n: usize, seed: u64) -> Vec<FitSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, 3.0).unwrap();
    let w = SegmentWeights::reference();
    (0..n)
        .map(|_| {
            let features = NormalizedScores::from_array([(); 4].map(|_| rng.gen_range(60.0..=100.0)));
            let level = synthetic_level(&features);
            FitSample { features, target: integrate(&features, &w, level) + noise.sample(&mut rng), level }
        })
        .collect()
}

/// Validation accuracy on margin-10 clusters.
pub fn separable_validation_accuracy() -> f64 {
    let (xs, ys) = super::checks::separable_clusters(80, 31);
    let (vx, vy) = super::checks::separable_clusters(80, 32);
    let model = train_svm(&xs, &ys, &SvmParams::default()).unwrap().model;
    accuracy(&model, &vx, &vy)
}

/// Labels from a noisy score; returns (validation accuracy, share of
/// misclassifications that land in an adjacent level).
pub fn noisy_label_experiment() -> (f64, f64) {
    let make = |seed: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let noise = Normal::new(0.0, 4.0).unwrap();
        let w = SegmentWeights::<f64>::reference();
        let xs: Vec<NormalizedScores<f64>> =
            (0..1500).map(|_| NormalizedScores::from_array([(); 4].map(|_| rng.gen_range(60.0..=100.0)))).collect();
        let ys: Vec<Level> = xs.iter().map(|x| Level::from_score(integrate(x, &w, Level::Mid) + noise.sample(&mut rng))).collect();
        (xs, ys)
    };
    let (xs, ys) = make(51);
    let (vx, vy) = make(52);
    let model = train_svm(&xs, &ys, &SvmParams::default()).unwrap().model;
    let mut wrong = 0usize;
    let mut adjacent = 0usize;
    for (x, y) in vx.iter().zip(&vy) {
        let p = model.predict(&x.to_array());
        if p != *y {
            wrong += 1;
            if p.index().abs_diff(y.index()) == 1 {
                adjacent += 1;
            }
        }
    }
    let acc = 1.0 - wrong as f64 / vy.len() as f64;
    (acc, if wrong == 0 { 1.0 } else { adjacent as f64 / wrong as f64 })
}
