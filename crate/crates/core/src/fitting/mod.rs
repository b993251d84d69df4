//! Calibration, ground truth, classifier training and weight fitting.

mod calibration;
mod cv;
mod dataset;
mod lad;
mod ratings;
mod svm;

pub use calibration::{calibrate_normalization, percentile, CalibrationMode};
pub use cv::{
    cross_validate, cross_validate_repeats, evaluation_mae, fit_model, prepare_dataset, split_indices, FitConfig, FitResult,
    FittedModel, PreparedCase, RepeatOutcome, MIN_CV_CASES,
};
pub use dataset::{read_rated, write_rated, RatedCase, RATED_SCHEMA};
pub use lad::{fit_segment_fixed_offset, fit_weights, mae, FitSample, MIN_SEGMENT_CASES};
pub use ratings::{filter_raters, ground_truth, GroundTruth, RaterFilter, MIN_TRIMMED_RATINGS, TRIM_FRACTION};
pub use svm::{accuracy, train_boundary, train_svm, BoundaryFit, SvmFit, SvmParams, FEATURE_CENTER, FEATURE_SCALE};
