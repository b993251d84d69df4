use std::io::Write;
use std::path::Path;

use anyhow::{bail, Result};

use s2o_core::safety::{risk_heatmap, GridSpec, RiskGrid};
use s2o_core::Case;

use super::evaluate::load_case;
use crate::config::Config;
use crate::Context;

/// Largest grid accepted, in cells.
pub const MAX_CELLS: usize = 4_000_000;

pub fn heatmap(case: &Case, frame: usize, cfg: &Config, spec: &GridSpec<f64>) -> Result<RiskGrid<f64>> {
    if !(spec.cell > 0.0 && spec.cell.is_finite()) || spec.rows == 0 || spec.cols == 0 {
        bail!("grid needs a positive cell size and at least one row and column");
    }
    if spec.rows.saturating_mul(spec.cols) > MAX_CELLS {
        bail!("grid of {} x {} exceeds {MAX_CELLS} cells", spec.rows, spec.cols);
    }
    let Some(f) = case.frames.get(frame) else {
        bail!("frame {frame} out of range, case has {} frames", case.frames.len());
    };
    Ok(risk_heatmap(f, &cfg.eval.dsf, spec))
}

pub fn run(ctx: &Context, path: &Path, frame: usize, cell: Option<f64>, rows: Option<usize>, cols: Option<usize>) -> Result<()> {
    let base = ctx.config.heatmap;
    let spec = GridSpec { cell: cell.unwrap_or(base.cell), rows: rows.unwrap_or(base.rows), cols: cols.unwrap_or(base.cols) };
    let case = load_case(path)?;
    let grid = heatmap(&case, frame, &ctx.config, &spec)?;
    let mut w = ctx.writer()?;
    grid.write_csv(&mut w)?;
    w.flush()?;
    Ok(())
}
