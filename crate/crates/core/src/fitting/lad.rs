//! Least-absolute-deviation fitting of the segment weights as a linear program.

use minilp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem};

use crate::error::{Error, Result};
use crate::pipeline::{integrate, Level, NormalizedScores, SegmentWeights, WeightRow};

/// Minimum number of training cases per level.
pub const MIN_SEGMENT_CASES: usize = 5;

/// Weights the solver returns slightly below zero are snapped to zero if
/// within this distance; anything further out is treated as a solver fault.
const NEGATIVE_SNAP: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitSample {
    pub features: NormalizedScores<f64>,
    pub target: f64,
    pub level: Level,
}

fn certify(w: f64, what: &str) -> Result<f64> {
    if !w.is_finite() || w < -NEGATIVE_SNAP {
        return Err(Error::Fit(format!("solver returned an infeasible {what} weight {w}")));
    }
    Ok(w.max(0.0))
}

fn residual_row(p: &mut Problem, coeffs: &[(minilp::Variable, f64)], target: f64, cost: f64) {
    let ep = p.add_var(cost, (0.0, f64::INFINITY));
    let em = p.add_var(cost, (0.0, f64::INFINITY));
    let mut e = LinearExpr::empty();
    for &(v, c) in coeffs {
        e.add(v, c);
    }
    e.add(ep, 1.0);
    e.add(em, -1.0);
    p.add_constraint(e, ComparisonOp::Eq, target);
}

/// Non-negative weights per level and one shared free offset minimizing the
/// mean absolute error over all samples.
pub fn fit_weights(samples: &[FitSample]) -> Result<SegmentWeights<f64>> {
    for level in Level::ALL {
        let n = samples.iter().filter(|s| s.level == level).count();
        if n < MIN_SEGMENT_CASES {
            return Err(Error::Fit(format!(
                "segment {} has {n} training cases, at least {MIN_SEGMENT_CASES} required",
                level.name()
            )));
        }
    }
    if samples.iter().any(|s| !s.target.is_finite() || s.features.to_array().iter().any(|v| !v.is_finite())) {
        return Err(Error::Fit("non-finite fitting sample".into()));
    }

    let mut p = Problem::new(OptimizationDirection::Minimize);
    let rows: Vec<Vec<_>> = Level::ALL.iter().map(|_| (0..4).map(|_| p.add_var(0.0, (0.0, f64::INFINITY))).collect()).collect();
    let b = p.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY));
    let cost = 1.0 / samples.len() as f64;
    for s in samples {
        let row = &rows[s.level.index()];
        let mut coeffs: Vec<_> = row.iter().zip(s.features.to_array()).map(|(v, x)| (*v, x)).collect();
        coeffs.push((b, 1.0));
        residual_row(&mut p, &coeffs, s.target, cost);
    }
    let sol = p.solve().map_err(|e| Error::Fit(format!("weight LP failed: {e}")))?;

    let mut out = SegmentWeights::reference();
    for level in Level::ALL {
        let vals: Vec<f64> = rows[level.index()].iter().map(|v| sol[*v]).collect();
        let mut arr = [0.0; 4];
        for k in 0..4 {
            arr[k] = certify(vals[k], level.name())?;
        }
        *out.row_mut(level) = WeightRow::from_array(arr);
    }
    out.offset = sol[b];
    out.validate()?;
    Ok(out)
}

/// Single-row fit with the offset held fixed.
pub fn fit_segment_fixed_offset(features: &[NormalizedScores<f64>], targets: &[f64], offset: f64) -> Result<WeightRow<f64>> {
    if features.len() != targets.len() || features.is_empty() {
        return Err(Error::Fit("feature and target lengths differ or are empty".into()));
    }
    let mut p = Problem::new(OptimizationDirection::Minimize);
    let w: Vec<_> = (0..4).map(|_| p.add_var(0.0, (0.0, f64::INFINITY))).collect();
    let cost = 1.0 / features.len() as f64;
    for (f, t) in features.iter().zip(targets) {
        let coeffs: Vec<_> = w.iter().zip(f.to_array()).map(|(v, x)| (*v, x)).collect();
        residual_row(&mut p, &coeffs, t - offset, cost);
    }
    let sol = p.solve().map_err(|e| Error::Fit(format!("weight LP failed: {e}")))?;
    let mut arr = [0.0; 4];
    for k in 0..4 {
        arr[k] = certify(sol[w[k]], "segment")?;
    }
    Ok(WeightRow::from_array(arr))
}

pub fn mae(samples: &[FitSample], w: &SegmentWeights<f64>) -> f64 {
    samples.iter().map(|s| (integrate(&s.features, w, s.level) - s.target).abs()).sum::<f64>() / samples.len().max(1) as f64
}
