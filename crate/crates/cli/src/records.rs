//! Line-delimited output records.

use serde::{Deserialize, Serialize};

use s2o_core::Report;

pub const REPORT_SCHEMA: &str = "s2o.report.v1";
pub const STREAM_SCHEMA: &str = "s2o.stream.v1";

/// One scored case from `evaluate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub schema: String,
    /// Input path as given.
    pub case: String,
    pub scenario: String,
    pub driver: String,
    pub frames: usize,
    pub report: Report,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StreamBody {
    /// Running score over every frame received so far.
    Report { frame: usize, t: f64, report: Report },
    /// A line that could not be used; the stream carries on.
    Error { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamRecord {
    pub schema: String,
    #[serde(flatten)]
    pub body: StreamBody,
}

impl StreamRecord {
    pub fn new(body: StreamBody) -> Self {
        StreamRecord { schema: STREAM_SCHEMA.to_string(), body }
    }
}
