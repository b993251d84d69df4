//! Simulated raters: the integrator with known weights plus Gaussian noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::fitting::RatedCase;
use crate::pipeline::{integrate, EvaluationReport, SegmentWeights};

/// Upper end of the uniform score given to crashed cases.
pub const CRASH_RATING_MAX: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleParams {
    pub sigma: f64,
    pub raters: usize,
    pub seed: u64,
}

/// One rated case per report. Non-crash ratings are the report's normalized
/// scores integrated with `truth` on the report's level, plus independent
/// `N(0, sigma)` noise per rater, clipped to `[0, 100]`. Crashed cases get
/// uniform ratings in `[0, 20]`.
pub fn synthetic_rating_oracle(
    reports: &[(String, EvaluationReport<f64>)],
    truth: &SegmentWeights<f64>,
    params: &OracleParams,
) -> Result<Vec<RatedCase>> {
    if params.raters == 0 {
        return Err(Error::InvalidParam("oracle needs at least one rater".into()));
    }
    let noise = Normal::new(0.0, params.sigma).map_err(|e| Error::InvalidParam(format!("oracle sigma: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    Ok(reports
        .iter()
        .map(|(id, r)| {
            let ratings = if r.crash {
                (0..params.raters).map(|_| rng.gen_range(0.0..=CRASH_RATING_MAX)).collect()
            } else {
                let clean = integrate(&r.normalized, truth, r.segment);
                (0..params.raters).map(|_| (clean + noise.sample(&mut rng)).clamp(0.0, 100.0)).collect()
            };
            RatedCase { id: id.clone(), raw: r.raw, ratings, crash: r.crash }
        })
        .collect())
}
