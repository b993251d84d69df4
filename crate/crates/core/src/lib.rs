//! Scoring of driving decision-making cases.
//!
//! Four physical terms (safety field risk, time efficiency, comfort, energy)
//! are computed from a trajectory log, normalized against a calibration
//! table, routed through a level classifier and fused by per-level linear
//! weights with a crash veto. The [`fitting`] module learns those artifacts
//! from rated cases and [`harness`] produces synthetic cases and ratings.
//!
//! The scoring math is generic over [`Scalar`]; the aliases below pin the
//! common `f64` and `f32` instantiations.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experience;
pub mod fitting;
pub mod harness;
pub mod model;
pub mod pipeline;
pub mod quadrature;
pub mod safety;
pub mod scalar;
pub mod trajectory;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Case = trajectory::DrivingCase<f64>;
pub type Frame = trajectory::SceneFrame<f64>;
pub type Report = pipeline::EvaluationReport<f64>;
pub type Model = pipeline::ScoringModel<f64>;
pub type Params = pipeline::EvalParams<f64>;
pub type Stream = pipeline::StreamEvaluator<f64>;

pub type CaseF32 = trajectory::DrivingCase<f32>;
pub type ReportF32 = pipeline::EvaluationReport<f32>;
pub type ModelF32 = pipeline::ScoringModel<f32>;
pub type ParamsF32 = pipeline::EvalParams<f32>;
