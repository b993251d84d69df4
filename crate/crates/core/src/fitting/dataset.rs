use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pipeline::TermScores;

pub const RATED_SCHEMA: &str = "s2o.rated.v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatedCase {
    pub id: String,
    pub raw: TermScores<f64>,
    /// One score per rater; position identifies the rater across cases.
    pub ratings: Vec<f64>,
    #[serde(default)]
    pub crash: bool,
}

impl RatedCase {
    pub fn validate(&self) -> Result<()> {
        if self.ratings.is_empty() {
            return Err(Error::Validation(format!("case {} has no ratings", self.id)));
        }
        if self.ratings.iter().any(|r| !(0.0..=100.0).contains(r)) {
            return Err(Error::Validation(format!("case {} has a rating outside [0, 100]", self.id)));
        }
        if self.raw.to_array().iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation(format!("case {} has a non-finite term score", self.id)));
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct Header {
    schema: String,
}

/// Reads a rated dataset: a schema header line followed by one case per line.
pub fn read_rated<R: BufRead>(reader: R) -> Result<Vec<RatedCase>> {
    let mut out = Vec::new();
    let mut header_seen = false;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        if !header_seen {
            let h: Header = serde_json::from_str(&line).map_err(|e| Error::Parse { line: line_no, msg: e.to_string() })?;
            if h.schema != RATED_SCHEMA {
                return Err(Error::Parse { line: line_no, msg: format!("unsupported schema {}", h.schema) });
            }
            header_seen = true;
            continue;
        }
        let case: RatedCase = serde_json::from_str(&line).map_err(|e| Error::Parse { line: line_no, msg: e.to_string() })?;
        case.validate().map_err(|e| Error::Parse { line: line_no, msg: e.to_string() })?;
        out.push(case);
    }
    if !header_seen {
        return Err(Error::Parse { line: 1, msg: "empty rated dataset".into() });
    }
    Ok(out)
}

pub fn write_rated<W: Write>(mut w: W, cases: &[RatedCase]) -> Result<()> {
    serde_json::to_writer(&mut w, &Header { schema: RATED_SCHEMA.into() })?;
    writeln!(w)?;
    for c in cases {
        serde_json::to_writer(&mut w, c)?;
        writeln!(w)?;
    }
    Ok(())
}
