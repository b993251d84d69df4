use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Raw factor scores in native units; every term is higher-is-worse.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TermScores<T> {
    pub safety: T,
    pub efficiency: T,
    pub comfort: T,
    pub energy: T,
}

/// Scores mapped to `[60, 100]`, higher-is-better.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NormalizedScores<T> {
    pub safety: T,
    pub efficiency: T,
    pub comfort: T,
    pub energy: T,
}

macro_rules! four_terms {
    ($ty:ident) => {
        impl<T: Copy> $ty<T> {
            pub fn to_array(&self) -> [T; 4] {
                [self.safety, self.efficiency, self.comfort, self.energy]
            }

            pub fn from_array(a: [T; 4]) -> Self {
                $ty { safety: a[0], efficiency: a[1], comfort: a[2], energy: a[3] }
            }

            pub fn map<U>(&self, f: impl Fn(T) -> U) -> $ty<U> {
                $ty { safety: f(self.safety), efficiency: f(self.efficiency), comfort: f(self.comfort), energy: f(self.energy) }
            }
        }
    };
}

four_terms!(TermScores);
four_terms!(NormalizedScores);

pub const TERM_NAMES: [&str; 4] = ["safety", "efficiency", "comfort", "energy"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TermRange<T> {
    pub min: T,
    pub max: T,
}

/// Per-term calibration extrema for max-min normalization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationTable<T> {
    pub safety: TermRange<T>,
    pub efficiency: TermRange<T>,
    pub comfort: TermRange<T>,
    pub energy: TermRange<T>,
}

impl<T: Scalar> CalibrationTable<T> {
    pub fn from_ranges(r: [TermRange<T>; 4]) -> Self {
        CalibrationTable { safety: r[0], efficiency: r[1], comfort: r[2], energy: r[3] }
    }

    pub fn ranges(&self) -> [TermRange<T>; 4] {
        [self.safety, self.efficiency, self.comfort, self.energy]
    }

    pub fn validate(&self) -> Result<()> {
        for (name, r) in TERM_NAMES.iter().zip(self.ranges()) {
            if !(r.min.is_finite() && r.max.is_finite() && r.max > r.min) {
                return Err(Error::InvalidParam(format!("degenerate calibration for {name}: min {} max {}", r.min, r.max)));
            }
        }
        Ok(())
    }
}

/// Max-min normalization onto `[60, 100]` with orientation inversion:
/// the calibration minimum maps to 100, the maximum to 60, values outside
/// the range clamp.
pub fn normalize<T: Scalar>(raw: &TermScores<T>, cal: &CalibrationTable<T>) -> Result<NormalizedScores<T>> {
    cal.validate()?;
    let out: Vec<T> = raw
        .to_array()
        .iter()
        .zip(cal.ranges())
        .map(|(&s, r)| {
            let t = ((s - r.min) / (r.max - r.min)).max(T::zero()).min(T::one());
            T::lit(100.0) - T::lit(40.0) * t
        })
        .collect();
    Ok(NormalizedScores::from_array([out[0], out[1], out[2], out[3]]))
}
