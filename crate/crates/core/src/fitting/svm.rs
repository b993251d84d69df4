//! Ordinal two-boundary linear SVM trained by averaged stochastic sub-gradient
//! descent on the regularized hinge loss.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pipeline::{Hyperplane, Level, LinearSvmModel, NormalizedScores};

/// Normalized scores are centered and scaled by these before training.
pub const FEATURE_CENTER: f64 = 80.0;
pub const FEATURE_SCALE: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SvmParams {
    /// L2 regularization strength on the standardized weights.
    pub lambda: f64,
    /// Number of sub-gradient steps per boundary.
    pub iterations: usize,
    /// Mini-batch size per step.
    pub batch: usize,
    /// Steps between objective evaluations of the averaged iterate.
    pub check_every: usize,
    pub seed: u64,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams { lambda: 1e-3, iterations: 20_000, batch: 16, check_every: 500, seed: 0x5eed }
    }
}

impl SvmParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0) || self.iterations == 0 || self.batch == 0 || self.check_every == 0 {
            return Err(Error::InvalidParam("svm lambda, iterations, batch and check_every must be positive".into()));
        }
        Ok(())
    }
}

/// A trained boundary plus the objective values recorded while training.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFit {
    pub plane: Hyperplane<f64>,
    /// Best objective of the averaged iterate so far, one entry per check.
    pub objective_trace: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvmFit {
    pub model: LinearSvmModel<f64>,
    pub low_mid: BoundaryFit,
    pub mid_high: BoundaryFit,
}

fn standardize(n: &NormalizedScores<f64>) -> [f64; 4] {
    n.to_array().map(|v| (v - FEATURE_CENTER) / FEATURE_SCALE)
}

fn objective(w: &[f64; 4], b: f64, xs: &[[f64; 4]], ys: &[f64], lambda: f64) -> f64 {
    let hinge: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let d = w.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + b;
            (1.0 - y * d).max(0.0)
        })
        .sum();
    0.5 * lambda * w.iter().map(|v| v * v).sum::<f64>() + hinge / xs.len() as f64
}

/// Trains one binary boundary on standardized features with labels in {-1, +1}.
pub fn train_boundary(xs: &[[f64; 4]], ys: &[f64], params: &SvmParams, stream: u64) -> BoundaryFit {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(stream);
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.shuffle(&mut rng);
    let mut cursor = 0;

    let mut w = [0.0; 4];
    let mut b = 0.0;
    let mut avg_w = [0.0; 4];
    let mut avg_b = 0.0;
    let mut best = (objective(&avg_w, avg_b, xs, ys, params.lambda), avg_w, avg_b);
    let mut trace = Vec::with_capacity(params.iterations / params.check_every + 1);
    trace.push(best.0);

    for step in 1..=params.iterations {
        let eta = 1.0 / (params.lambda * (step as f64 + 10.0));
        let mut gw = w.map(|v| params.lambda * v);
        let mut gb = 0.0;
        for _ in 0..params.batch {
            if cursor == order.len() {
                order.shuffle(&mut rng);
                cursor = 0;
            }
            let i = order[cursor];
            cursor += 1;
            let x = &xs[i];
            let d = w.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + b;
            if ys[i] * d < 1.0 {
                let scale = ys[i] / params.batch as f64;
                for k in 0..4 {
                    gw[k] -= scale * x[k];
                }
                gb -= scale;
            }
        }
        for k in 0..4 {
            w[k] -= eta * gw[k];
        }
        // The bias is unregularized; a tempered step keeps it from oscillating.
        b -= eta.min(1.0) * gb;

        let inv = 1.0 / step as f64;
        for k in 0..4 {
            avg_w[k] += (w[k] - avg_w[k]) * inv;
        }
        avg_b += (b - avg_b) * inv;

        if step % params.check_every == 0 || step == params.iterations {
            let obj = objective(&avg_w, avg_b, xs, ys, params.lambda);
            if obj < best.0 {
                best = (obj, avg_w, avg_b);
            }
            trace.push(best.0);
        }
    }

    // Undo the standardization so the plane acts on raw normalized scores.
    let (_, zw, zb) = best;
    let w_raw = zw.map(|v| v / FEATURE_SCALE);
    let bias = zb - zw.iter().sum::<f64>() * FEATURE_CENTER / FEATURE_SCALE;
    BoundaryFit { plane: Hyperplane { w: w_raw, bias }, objective_trace: trace }
}

pub fn train_svm(features: &[NormalizedScores<f64>], labels: &[Level], params: &SvmParams) -> Result<SvmFit> {
    params.validate()?;
    if features.len() != labels.len() {
        return Err(Error::Fit(format!("{} feature rows but {} labels", features.len(), labels.len())));
    }
    let mut present = [false; 3];
    for l in labels {
        present[l.index()] = true;
    }
    if present.iter().filter(|p| **p).count() < 2 {
        return Err(Error::Fit("svm training needs at least 2 classes".into()));
    }
    let xs: Vec<[f64; 4]> = features.iter().map(standardize).collect();
    let side = |above: fn(Level) -> bool| -> Vec<f64> { labels.iter().map(|l| if above(*l) { 1.0 } else { -1.0 }).collect() };
    let low_mid = train_boundary(&xs, &side(|l| l != Level::Low), params, 1);
    let mid_high = train_boundary(&xs, &side(|l| l == Level::High), params, 2);
    Ok(SvmFit { model: LinearSvmModel { low_mid: low_mid.plane, mid_high: mid_high.plane }, low_mid, mid_high })
}

pub fn accuracy(model: &LinearSvmModel<f64>, features: &[NormalizedScores<f64>], labels: &[Level]) -> f64 {
    let hits = features.iter().zip(labels).filter(|(f, l)| model.predict(&f.to_array()) == **l).count();
    hits as f64 / labels.len().max(1) as f64
}
