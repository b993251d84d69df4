//! Rater quality filtering and trimmed-mean ground truth.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pipeline::Level;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RaterFilter {
    /// Raters whose score variance is below this are dropped.
    pub min_variance: f64,
    /// Raters whose mean absolute offset from the other raters' per-case
    /// average exceeds this are dropped.
    pub max_offset: f64,
}

impl Default for RaterFilter {
    fn default() -> Self {
        RaterFilter { min_variance: 5.0, max_offset: 30.0 }
    }
}

/// Returns the retained rater indices, ascending. `ratings[case][rater]`;
/// `None` marks a missing rating.
pub fn filter_raters(ratings: &[Vec<Option<f64>>], filter: &RaterFilter) -> Result<Vec<usize>> {
    let n_raters = ratings.iter().map(Vec::len).max().unwrap_or(0);
    let get = |c: usize, r: usize| ratings[c].get(r).copied().flatten();
    let mut kept = Vec::new();
    for r in 0..n_raters {
        let own: Vec<f64> = (0..ratings.len()).filter_map(|c| get(c, r)).collect();
        if own.is_empty() {
            continue;
        }
        let mean = own.iter().sum::<f64>() / own.len() as f64;
        let variance = own.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / own.len() as f64;
        if variance < filter.min_variance {
            continue;
        }
        let mut offsets = Vec::new();
        for c in 0..ratings.len() {
            let Some(mine) = get(c, r) else { continue };
            let others: Vec<f64> = (0..n_raters).filter(|&o| o != r).filter_map(|o| get(c, o)).collect();
            if !others.is_empty() {
                let avg = others.iter().sum::<f64>() / others.len() as f64;
                offsets.push((mine - avg).abs());
            }
        }
        if !offsets.is_empty() && offsets.iter().sum::<f64>() / offsets.len() as f64 > filter.max_offset {
            continue;
        }
        kept.push(r);
    }
    if kept.is_empty() {
        return Err(Error::Fit("every rater was filtered out".into()));
    }
    Ok(kept)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub case_id: String,
    pub score: f64,
    pub label: Level,
}

/// Share of ratings dropped from each end before averaging.
pub const TRIM_FRACTION: f64 = 0.1;
/// Minimum number of ratings for trimming to apply.
pub const MIN_TRIMMED_RATINGS: usize = 10;

/// Trimmed mean of one case's ratings: `ceil(10%)` are removed from each end
/// when at least ten ratings exist, otherwise the plain mean is used.
pub fn ground_truth(case_id: &str, ratings: &[f64]) -> Result<GroundTruth> {
    if ratings.is_empty() {
        return Err(Error::Fit(format!("case {case_id} has no ratings")));
    }
    if ratings.iter().any(|r| !(0.0..=100.0).contains(r)) {
        return Err(Error::Fit(format!("case {case_id} has a rating outside [0, 100]")));
    }
    let mut sorted = ratings.to_vec();
    sorted.sort_by(f64::total_cmp);
    let kept = if sorted.len() >= MIN_TRIMMED_RATINGS {
        let k = (sorted.len() as f64 * TRIM_FRACTION).ceil() as usize;
        &sorted[k..sorted.len() - k]
    } else {
        log::debug!("case {case_id}: {} ratings, using the untrimmed mean", sorted.len());
        &sorted[..]
    };
    let score = kept.iter().sum::<f64>() / kept.len() as f64;
    Ok(GroundTruth { case_id: case_id.to_string(), score, label: Level::from_score(score) })
}
