//! Versioned model file holding calibration, classifier and weights.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitting::{calibrate_normalization, train_svm, CalibrationMode, SvmParams};
use crate::harness::generate_corpus;
use crate::pipeline::{
    integrate, normalize, raw_terms, CalibrationTable, TermScores, EvalParams, Level, LinearSvmModel, ScoringModel, SegmentWeights,
};

pub const MODEL_SCHEMA: &str = "s2o.model.v1";

/// Shipped default: reference weights with a classifier and calibration
/// trained on synthetic harness cases. Fit on a real rated corpus for
/// deployment.
pub const DEFAULT_MODEL_JSON: &str = include_str!("../assets/default_model.json");

/// Size and seed of the synthetic corpus behind the default model.
pub const DEFAULT_CORPUS_SIZE: usize = 480;
pub const DEFAULT_CORPUS_SEED: u64 = 20_240_417;
pub const DEFAULT_CALIBRATION: CalibrationMode = CalibrationMode::MinMax;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub schema: String,
    pub calibration: CalibrationTable<f64>,
    pub classifier: LinearSvmModel<f64>,
    pub weights: SegmentWeights<f64>,
}

impl ModelFile {
    pub fn new(model: &ScoringModel<f64>) -> Self {
        ModelFile {
            schema: MODEL_SCHEMA.to_string(),
            calibration: model.calibration,
            classifier: model.classifier,
            weights: model.weights,
        }
    }

    pub fn model(&self) -> ScoringModel<f64> {
        ScoringModel { calibration: self.calibration, classifier: self.classifier, weights: self.weights }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != MODEL_SCHEMA {
            return Err(Error::Model(format!("unsupported schema {:?}, expected {MODEL_SCHEMA}", self.schema)));
        }
        self.model().validate().map_err(|e| Error::Model(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: ModelFile = serde_json::from_str(text).map_err(|e| Error::Model(e.to_string()))?;
        m.validate()?;
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text).map_err(|e| Error::Model(format!("{}: {e}", path.display())))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

pub fn default_model_file() -> ModelFile {
    ModelFile::from_json(DEFAULT_MODEL_JSON).expect("embedded default model is valid")
}

pub fn default_model() -> ScoringModel<f64> {
    default_model_file().model()
}

/// Level used to train the default classifier: the bracket of the mid-row
/// integrated score, a neutral stand-in for human level judgments.
pub fn synthetic_level(n: &crate::pipeline::NormalizedScores<f64>) -> Level {
    Level::from_score(integrate(n, &SegmentWeights::reference(), Level::Mid))
}

/// Reference weights plus a calibration and classifier fitted to the
/// non-crash cases of a synthetic corpus, with [`synthetic_level`] labels.
pub fn reference_model(raws: &[TermScores<f64>], crash: &[bool], mode: CalibrationMode) -> Result<ScoringModel<f64>> {
    let clean: Vec<TermScores<f64>> = raws.iter().zip(crash).filter(|(_, c)| !**c).map(|(r, _)| *r).collect();
    let calibration = calibrate_normalization(&clean, mode)?;
    let features = clean.iter().map(|r| normalize(r, &calibration)).collect::<Result<Vec<_>>>()?;
    let labels: Vec<Level> = features.iter().map(synthetic_level).collect();
    let svm = train_svm(&features, &labels, &SvmParams::default())?;
    Ok(ScoringModel { calibration, classifier: svm.model, weights: SegmentWeights::reference() })
}

/// Rebuilds the shipped default model from the harness.
pub fn build_default_model() -> Result<ModelFile> {
    let cases = generate_corpus(DEFAULT_CORPUS_SIZE, DEFAULT_CORPUS_SEED)?;
    let params = EvalParams::default();
    let raws = cases.par_iter().map(|c| raw_terms(c, &params)).collect::<Result<Vec<_>>>()?;
    let crash: Vec<bool> = cases.iter().map(|c| c.crash).collect();
    Ok(ModelFile::new(&reference_model(&raws, &crash, DEFAULT_CALIBRATION)?))
}
