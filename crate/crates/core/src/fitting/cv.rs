//! The fit protocol: ground truth, calibration, classifier, weights, and
//! repeated hold-out validation.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::calibration::{calibrate_normalization, CalibrationMode};
use super::dataset::RatedCase;
use super::lad::{fit_weights, mae, FitSample};
use super::ratings::{filter_raters, ground_truth, GroundTruth, RaterFilter, MIN_TRIMMED_RATINGS};
use super::svm::{train_svm, SvmParams};
use crate::error::{Error, Result};
use crate::pipeline::{normalize, score_terms, Level, ScoringModel, SegmentWeights, TermScores};

/// Smallest dataset accepted by [`cross_validate`].
pub const MIN_CV_CASES: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FitConfig {
    pub rater_filter: RaterFilter,
    pub calibration: CalibrationMode,
    pub svm: SvmParams,
    pub repeats: usize,
    pub train_fraction: f64,
    pub seed: u64,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            rater_filter: RaterFilter::default(),
            calibration: CalibrationMode::MinMax,
            svm: SvmParams::default(),
            repeats: 5,
            train_fraction: 0.8,
            seed: 2024,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        self.svm.validate()?;
        if self.repeats == 0 || !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::InvalidParam("repeats must be positive and train_fraction in (0, 1)".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreparedCase {
    pub raw: TermScores<f64>,
    pub crash: bool,
    pub truth: GroundTruth,
}

/// Drops unreliable raters, then reduces each case to its ground truth.
pub fn prepare_dataset(cases: &[RatedCase], filter: &RaterFilter) -> Result<(Vec<PreparedCase>, Vec<usize>)> {
    for c in cases {
        c.validate()?;
    }
    let matrix: Vec<Vec<Option<f64>>> = cases.iter().map(|c| c.ratings.iter().map(|r| Some(*r)).collect()).collect();
    let kept = filter_raters(&matrix, filter)?;
    let mut short = 0;
    let mut out = Vec::with_capacity(cases.len());
    for c in cases {
        let ratings: Vec<f64> = kept.iter().filter_map(|&r| c.ratings.get(r).copied()).collect();
        if ratings.len() < MIN_TRIMMED_RATINGS {
            short += 1;
        }
        out.push(PreparedCase { raw: c.raw, crash: c.crash, truth: ground_truth(&c.id, &ratings)? });
    }
    if short > 0 {
        log::warn!("{short} of {} cases have fewer than {MIN_TRIMMED_RATINGS} ratings; their ground truth is untrimmed", cases.len());
    }
    Ok((out, kept))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FittedModel {
    pub model: ScoringModel<f64>,
    /// Weight-fit MAE over the non-crash training cases, with ground-truth levels.
    pub train_mae: f64,
    pub svm_train_accuracy: f64,
}

/// Fits calibration, classifier and weights on `train` only. Crashed cases
/// are left out of all three: the veto overrides their score, and a
/// collision's near-zero distance would otherwise set the safety range.
pub fn fit_model(train: &[PreparedCase], cfg: &FitConfig) -> Result<FittedModel> {
    let clean: Vec<&PreparedCase> = train.iter().filter(|c| !c.crash).collect();
    let raws: Vec<TermScores<f64>> = clean.iter().map(|c| c.raw).collect();
    let calibration = calibrate_normalization(&raws, cfg.calibration)?;
    let features = clean.iter().map(|c| normalize(&c.raw, &calibration)).collect::<Result<Vec<_>>>()?;
    let labels: Vec<Level> = clean.iter().map(|c| c.truth.label).collect();
    let svm = train_svm(&features, &labels, &cfg.svm)?;
    let samples: Vec<FitSample> = features
        .iter()
        .zip(&clean)
        .map(|(f, c)| FitSample { features: *f, target: c.truth.score, level: c.truth.label })
        .collect();
    let weights = fit_weights(&samples)?;
    let svm_train_accuracy = super::svm::accuracy(&svm.model, &features, &labels);
    Ok(FittedModel {
        model: ScoringModel { calibration, classifier: svm.model, weights },
        train_mae: mae(&samples, &weights),
        svm_train_accuracy,
    })
}

/// Mean absolute error of end-to-end scores (classifier-selected rows, crash veto).
pub fn evaluation_mae(model: &ScoringModel<f64>, cases: &[PreparedCase]) -> Result<f64> {
    let mut total = 0.0;
    for c in cases {
        let report = score_terms(c.raw, c.crash, model)?;
        total += (report.final_score - c.truth.score).abs();
    }
    Ok(total / cases.len().max(1) as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepeatOutcome {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
    pub fitted: FittedModel,
    pub validation_mae: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    /// Weights fitted on the whole dataset.
    pub weights: SegmentWeights<f64>,
    pub train_mae: f64,
    /// Mean over repeats.
    pub validation_mae: f64,
    pub per_repeat: Vec<f64>,
    pub repeats: Vec<RepeatOutcome>,
}

/// Seeded train/validation split for one repeat.
pub fn split_indices(n: usize, fraction: f64, seed: u64, repeat: usize) -> (Vec<usize>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(repeat as u64);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut rng);
    let cut = ((n as f64) * fraction).round() as usize;
    let mut train = idx[..cut].to_vec();
    let mut val = idx[cut..].to_vec();
    train.sort_unstable();
    val.sort_unstable();
    (train, val)
}

pub fn cross_validate_repeats(cases: &[PreparedCase], cfg: &FitConfig) -> Result<Vec<RepeatOutcome>> {
    cfg.validate()?;
    if cases.len() < MIN_CV_CASES {
        return Err(Error::Fit(format!("cross-validation needs at least {MIN_CV_CASES} cases, got {}", cases.len())));
    }
    (0..cfg.repeats)
        .into_par_iter()
        .map(|r| {
            let (train, validation) = split_indices(cases.len(), cfg.train_fraction, cfg.seed, r);
            let train_set: Vec<PreparedCase> = train.iter().map(|&i| cases[i].clone()).collect();
            let fitted = fit_model(&train_set, cfg).map_err(|e| Error::Fit(format!("repeat {r}: {e}")))?;
            let val_set: Vec<PreparedCase> = validation.iter().map(|&i| cases[i].clone()).collect();
            let validation_mae = evaluation_mae(&fitted.model, &val_set)?;
            Ok(RepeatOutcome { train, validation, fitted, validation_mae })
        })
        .collect()
}

pub fn cross_validate(cases: &[PreparedCase], cfg: &FitConfig) -> Result<(FittedModel, FitResult)> {
    let full = fit_model(cases, cfg)?;
    let repeats = cross_validate_repeats(cases, cfg)?;
    let per_repeat: Vec<f64> = repeats.iter().map(|r| r.validation_mae).collect();
    let result = FitResult {
        weights: full.model.weights,
        train_mae: full.train_mae,
        validation_mae: per_repeat.iter().sum::<f64>() / per_repeat.len() as f64,
        per_repeat,
        repeats,
    };
    Ok((full, result))
}
