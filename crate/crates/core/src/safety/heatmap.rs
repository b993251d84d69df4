//! Rasterized risk field around the ego.

use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::field::{closing_speed, equivalent_distance_raw, risk_from_parts, virtual_mass, DsfParams};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::trajectory::{in_roi, SceneFrame};

pub const GRID_SCHEMA: &str = "s2o.riskgrid.v1";

/// Window of `rows x cols` square cells centred on the ego, world-axis aligned.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec<T> {
    pub cell: T,
    pub rows: usize,
    pub cols: usize,
}

impl<T: Scalar> Default for GridSpec<T> {
    fn default() -> Self {
        GridSpec { cell: T::one(), rows: 40, cols: 160 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RiskGrid<T> {
    /// World coordinates of the lower-left corner of cell (0, 0).
    pub origin: (T, T),
    pub cell: T,
    pub rows: usize,
    pub cols: usize,
    /// Row-major; row index grows with y, column index with x.
    pub values: Vec<T>,
}

impl<T: Scalar> RiskGrid<T> {
    pub fn get(&self, row: usize, col: usize) -> T {
        self.values[row * self.cols + col]
    }

    pub fn cell_center(&self, row: usize, col: usize) -> (T, T) {
        let half = T::lit(0.5);
        let c = |i: usize| T::from_usize(i).expect("index fits");
        (self.origin.0 + (c(col) + half) * self.cell, self.origin.1 + (c(row) + half) * self.cell)
    }

    pub fn argmax(&self) -> (usize, usize) {
        let mut best = 0;
        for (i, v) in self.values.iter().enumerate() {
            if *v > self.values[best] {
                best = i;
            }
        }
        (best / self.cols, best % self.cols)
    }

    /// Headered CSV: a schema/metadata header pair, then one line per row.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "schema,origin_x,origin_y,cell_size,rows,cols")?;
        writeln!(w, "{GRID_SCHEMA},{},{},{},{},{}", self.origin.0, self.origin.1, self.cell, self.rows, self.cols)?;
        for r in 0..self.rows {
            let line: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let bad = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
        let _ = lines.next().ok_or_else(|| bad(1, "missing header"))?.1?;
        let (_, meta) = lines.next().ok_or_else(|| bad(2, "missing metadata"))?;
        let meta = meta?;
        let f: Vec<&str> = meta.split(',').collect();
        if f.len() != 6 || f[0] != GRID_SCHEMA {
            return Err(bad(2, "bad metadata line"));
        }
        let num = |s: &str| s.trim().parse::<f64>().map_err(|e| bad(2, &e.to_string()));
        let rows: usize = f[4].trim().parse().map_err(|_| bad(2, "rows"))?;
        let cols: usize = f[5].trim().parse().map_err(|_| bad(2, "cols"))?;
        let mut values = Vec::with_capacity(rows * cols);
        for (i, line) in lines {
            let line = line?;
            for v in line.split(',') {
                values.push(T::lit(v.trim().parse::<f64>().map_err(|e| bad(i + 1, &e.to_string()))?));
            }
        }
        if values.len() != rows * cols {
            return Err(bad(0, "value count does not match rows x cols"));
        }
        Ok(RiskGrid { origin: (T::lit(num(f[1])?), T::lit(num(f[2])?)), cell: T::lit(num(f[3])?), rows, cols, values })
    }
}

/// Evaluates ego risk with a virtual probe at each cell centre. The probe
/// keeps the ego heading, velocity and ROI. Equivalent distances are floored
/// at half a cell, which caps the cells that sit on an agent centre.
pub fn risk_heatmap<T: Scalar>(frame: &SceneFrame<T>, p: &DsfParams<T>, spec: &GridSpec<T>) -> RiskGrid<T> {
    let ego = frame.ego.body;
    let half = T::lit(0.5);
    let width = spec.cell * T::from_usize(spec.cols).expect("cols fit");
    let height = spec.cell * T::from_usize(spec.rows).expect("rows fit");
    let origin = (ego.x - width * half, ego.y - height * half);
    let floor = spec.cell * half;
    let mut grid = RiskGrid { origin, cell: spec.cell, rows: spec.rows, cols: spec.cols, values: vec![] };
    let masses: Vec<T> = frame.agents.iter().map(|a| virtual_mass(&a.body, p)).collect();
    let values: Vec<T> = (0..spec.rows * spec.cols)
        .into_par_iter()
        .map(|idx| {
            let (cx, cy) = grid.cell_center(idx / spec.cols, idx % spec.cols);
            let mut probe = ego;
            probe.x = cx;
            probe.y = cy;
            let mut total = T::zero();
            for (a, &m_eq) in frame.agents.iter().zip(&masses) {
                if !in_roi(&probe, &a.body, &p.roi) {
                    continue;
                }
                let r_eq = equivalent_distance_raw(&probe, &a.body).unwrap_or(T::zero()).max(floor);
                total = total + risk_from_parts(m_eq, r_eq, closing_speed(&probe, &a.body), p);
            }
            total
        })
        .collect();
    grid.values = values;
    grid
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::{AgentKind, AgentState, Body, EgoState, Kinematics, RoadSection};

    fn scene(agents: Vec<(f64, f64)>) -> SceneFrame<f64> {
        SceneFrame {
            t: 0.0,
            ego: EgoState {
                body: Body::new(0.0, 0.0, 0.0, 10.0, 4.5, 1.8, 1500.0),
                section: RoadSection::UrbanRegular,
                kin: Kinematics::default(),
            },
            agents: agents
                .into_iter()
                .enumerate()
                .map(|(i, (x, y))| AgentState {
                    id: format!("a{i}"),
                    kind: AgentKind::Car,
                    body: Body::new(x, y, 0.0, 10.0, 4.5, 1.8, 1500.0),
                })
                .collect(),
        }
    }

    #[test]
    fn empty_scene_is_zero() {
        let g = risk_heatmap(&scene(vec![]), &DsfParams::default(), &GridSpec::default());
        assert!(g.values.iter().all(|v| *v == 0.0));
        assert_eq!(g.values.len(), 40 * 160);
    }

    #[test]
    fn argmax_is_nearest_cell_to_agent() {
        let spec = GridSpec { cell: 1.0, rows: 20, cols: 40 };
        let g = risk_heatmap(&scene(vec![(7.3, 2.2)]), &DsfParams::default(), &spec);
        let (r, c) = g.argmax();
        let (cx, cy) = g.cell_center(r, c);
        assert!((cx - 7.5).abs() < 1e-9 && (cy - 2.5).abs() < 1e-9, "argmax at ({cx}, {cy})");
        let top = g.get(r, c);
        assert_eq!(g.values.iter().filter(|v| **v == top).count(), 1);
    }

    #[test]
    fn mirror_symmetric_scene() {
        let spec = GridSpec { cell: 1.0, rows: 20, cols: 40 };
        let g = risk_heatmap(&scene(vec![(20.0, 3.5), (20.0, -3.5)]), &DsfParams::default(), &spec);
        for r in 0..spec.rows {
            for c in 0..spec.cols {
                let a = g.get(r, c);
                let b = g.get(spec.rows - 1 - r, c);
                assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
            }
        }
    }

    #[test]
    fn csv_round_trip() {
        let spec = GridSpec { cell: 2.0, rows: 3, cols: 4 };
        let g = risk_heatmap(&scene(vec![(5.0, 1.0)]), &DsfParams::default(), &spec);
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let back = RiskGrid::<f64>::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, g);
    }
}
