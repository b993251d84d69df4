use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pipeline::{CalibrationTable, TermRange, TermScores, TERM_NAMES};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CalibrationMode {
    /// Corpus minimum and maximum.
    #[default]
    MinMax,
    /// 1st and 99th percentiles.
    Robust,
}

/// Linear-interpolation percentile of sorted data, `q` in `[0, 100]`.
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q / 100.0 * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn calibrate_normalization(terms: &[TermScores<f64>], mode: CalibrationMode) -> Result<CalibrationTable<f64>> {
    let mut ranges = [TermRange { min: 0.0, max: 0.0 }; 4];
    for (k, name) in TERM_NAMES.iter().enumerate() {
        let mut col: Vec<f64> = terms.iter().map(|t| t.to_array()[k]).collect();
        if col.iter().any(|v| !v.is_finite()) {
            return Err(Error::Fit(format!("non-finite {name} score in calibration corpus")));
        }
        col.sort_by(f64::total_cmp);
        col.dedup();
        if col.len() < 2 {
            return Err(Error::Fit(format!("{name} column has fewer than 2 distinct values")));
        }
        let mut full: Vec<f64> = terms.iter().map(|t| t.to_array()[k]).collect();
        full.sort_by(f64::total_cmp);
        let (min, max) = match mode {
            CalibrationMode::MinMax => (full[0], full[full.len() - 1]),
            CalibrationMode::Robust => (percentile(&full, 1.0), percentile(&full, 99.0)),
        };
        if !(max > min) {
            return Err(Error::Fit(format!("{name} percentile range is empty")));
        }
        ranges[k] = TermRange { min, max };
    }
    Ok(CalibrationTable::from_ranges(ranges))
}
