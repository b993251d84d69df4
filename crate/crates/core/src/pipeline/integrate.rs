use serde::{Deserialize, Serialize};

use super::segment::Level;
use super::terms::NormalizedScores;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightRow<T> {
    pub safety: T,
    pub efficiency: T,
    pub comfort: T,
    pub energy: T,
}

impl<T: Scalar> WeightRow<T> {
    pub fn from_array(a: [T; 4]) -> Self {
        WeightRow { safety: a[0], efficiency: a[1], comfort: a[2], energy: a[3] }
    }

    pub fn to_array(&self) -> [T; 4] {
        [self.safety, self.efficiency, self.comfort, self.energy]
    }
}

/// Non-negative weights per level plus one offset shared by all levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentWeights<T> {
    pub low: WeightRow<T>,
    pub mid: WeightRow<T>,
    pub high: WeightRow<T>,
    pub offset: T,
}

impl<T: Scalar> SegmentWeights<T> {
    /// Human-calibrated weights shipped as the default model.
    pub fn reference() -> Self {
        let row = |a: [f64; 4]| WeightRow::from_array(a.map(T::lit));
        SegmentWeights {
            low: row([0.165, 0.235, 0.010, 0.280]),
            mid: row([0.160, 0.343, 0.161, 0.166]),
            high: row([0.010, 0.103, 0.507, 0.238]),
            offset: T::lit(10.0),
        }
    }

    pub fn row(&self, level: Level) -> &WeightRow<T> {
        match level {
            Level::Low => &self.low,
            Level::Mid => &self.mid,
            Level::High => &self.high,
        }
    }

    pub fn row_mut(&mut self, level: Level) -> &mut WeightRow<T> {
        match level {
            Level::Low => &mut self.low,
            Level::Mid => &mut self.mid,
            Level::High => &mut self.high,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for level in Level::ALL {
            if self.row(level).to_array().iter().any(|w| !(*w >= T::zero()) || !w.is_finite()) {
                return Err(Error::InvalidParam(format!("{} weights must be finite and non-negative", level.name())));
            }
        }
        if !self.offset.is_finite() {
            return Err(Error::InvalidParam("offset must be finite".into()));
        }
        Ok(())
    }
}

/// Weighted sum of the normalized scores with the level's row plus the offset.
pub fn integrate<T: Scalar>(n: &NormalizedScores<T>, w: &SegmentWeights<T>, level: Level) -> T {
    let row = w.row(level).to_array();
    n.to_array().iter().zip(row).fold(T::zero(), |acc, (s, w)| acc + w * *s) + w.offset
}

/// Crash veto: a crashed case scores 0.
pub fn crash_revision<T: Scalar>(score: T, crash: bool) -> T {
    if crash {
        T::zero()
    } else {
        score
    }
}
