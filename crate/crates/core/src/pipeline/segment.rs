use serde::{Deserialize, Serialize};

use super::terms::NormalizedScores;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Upper (inclusive) score of the low level.
pub const LOW_UPPER: f64 = 75.0;
/// Upper (inclusive) score of the mid level.
pub const MID_UPPER: f64 = 85.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Low,
    Mid,
    High,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::Low, Level::Mid, Level::High];

    /// Bracket of a 0-100 score: low `[0, 75]`, mid `(75, 85]`, high `(85, 100]`.
    pub fn from_score(score: f64) -> Level {
        if score <= LOW_UPPER {
            Level::Low
        } else if score <= MID_UPPER {
            Level::Mid
        } else {
            Level::High
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Level {
        Level::ALL[i.min(2)]
    }

    pub fn name(self) -> &'static str {
        match self {
            Level::Low => "low",
            Level::Mid => "mid",
            Level::High => "high",
        }
    }
}

/// One linear decision surface `w . x + bias` over the normalized scores.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane<T> {
    pub w: [T; 4],
    pub bias: T,
}

impl<T: Scalar> Hyperplane<T> {
    pub fn decision(&self, x: &[T; 4]) -> T {
        self.w.iter().zip(x).fold(self.bias, |acc, (w, v)| acc + *w * *v)
    }
}

/// Ordinal classifier: `low_mid` separates low from {mid, high} and
/// `mid_high` separates {low, mid} from high. The level is the number of
/// boundaries on whose positive side the case falls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearSvmModel<T> {
    pub low_mid: Hyperplane<T>,
    pub mid_high: Hyperplane<T>,
}

impl<T: Scalar> LinearSvmModel<T> {
    pub fn validate(&self) -> Result<()> {
        let finite = |h: &Hyperplane<T>| h.bias.is_finite() && h.w.iter().all(|v| v.is_finite());
        if finite(&self.low_mid) && finite(&self.mid_high) {
            Ok(())
        } else {
            Err(Error::InvalidParam("non-finite classifier parameters".into()))
        }
    }

    pub fn predict(&self, x: &[T; 4]) -> Level {
        let above_low = self.low_mid.decision(x) > T::zero();
        let above_mid = self.mid_high.decision(x) > T::zero();
        Level::from_index(above_low as usize + above_mid as usize)
    }
}

/// Crashed cases are always low; everything else goes through the classifier.
pub fn classify_segment<T: Scalar>(n: &NormalizedScores<T>, model: &LinearSvmModel<T>, crash: bool) -> Level {
    if crash {
        Level::Low
    } else {
        model.predict(&n.to_array())
    }
}
