//! Driving safety field: per-agent risk, superposition, time-averaged safety
//! score and a rasterized field.

mod field;
mod heatmap;

pub use field::*;
pub use heatmap::{risk_heatmap, GridSpec, RiskGrid, GRID_SCHEMA};
