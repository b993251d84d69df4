//! Line-oriented case log (JSON Lines).
//!
//! Line 1 is a header, every following non-blank line is one frame:
//!
//! ```text
//! {"schema":"s2o.case.v1","scenario":"cf-1","driver":"idm","road":{"gradient":0.0,"rolling_coeff":0.015}}
//! {"t":0.0,"ego":{"x":0,"y":0,"heading":0,"speed":10,"length":4.6,"width":1.9,"mass":1500,"section":"urban_regular"},"agents":[...]}
//! ```
//!
//! Agent records carry `id, kind, x, y, heading, speed, length, width` and
//! optionally `mass` (kind default) and `v_long` (defaults to `speed`).
//! The ego `speed` may be omitted on every frame; it is then rebuilt from
//! positions by [`derive_kinematics`](super::derive_kinematics).

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::resample::resample_if_irregular;
use super::types::*;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const CASE_SCHEMA: &str = "s2o.case.v1";

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HeaderRecord {
    schema: String,
    #[serde(default)]
    scenario: String,
    #[serde(default)]
    driver: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    crash: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    road: Option<RoadContext<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EgoRecord {
    x: f64,
    y: f64,
    heading: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    speed: Option<f64>,
    length: f64,
    width: f64,
    mass: f64,
    section: RoadSection,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AgentRecord {
    id: String,
    kind: AgentKind,
    x: f64,
    y: f64,
    heading: f64,
    speed: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    v_long: Option<f64>,
    length: f64,
    width: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mass: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameRecord {
    t: f64,
    ego: EgoRecord,
    #[serde(default)]
    agents: Vec<AgentRecord>,
}

/// Incremental frame decoder, also used by the streaming evaluator.
#[derive(Debug, Default)]
pub struct FrameDecoder {
    speed_missing: bool,
}

impl FrameDecoder {
    /// Decodes one frame line. `line_no` is 1-based and only used for errors.
    pub fn decode<T: Scalar>(&mut self, line: &str, line_no: usize) -> Result<SceneFrame<T>> {
        let rec: FrameRecord =
            serde_json::from_str(line).map_err(|e| Error::Parse { line: line_no, msg: e.to_string() })?;
        if rec.ego.speed.is_none() {
            self.speed_missing = true;
        }
        let l = T::lit;
        let ego = EgoState {
            body: Body::new(
                l(rec.ego.x),
                l(rec.ego.y),
                l(rec.ego.heading),
                l(rec.ego.speed.unwrap_or(0.0)),
                l(rec.ego.length),
                l(rec.ego.width),
                l(rec.ego.mass),
            ),
            section: rec.ego.section,
            kin: Kinematics::default(),
        };
        let agents = rec
            .agents
            .into_iter()
            .map(|a| {
                let mut body = Body::new(
                    l(a.x),
                    l(a.y),
                    l(a.heading),
                    l(a.speed),
                    l(a.length),
                    l(a.width),
                    l(a.mass.unwrap_or_else(|| a.kind.default_mass())),
                );
                if let Some(v) = a.v_long {
                    body.v_long = l(v);
                }
                AgentState { id: a.id, kind: a.kind, body }
            })
            .collect();
        let frame = SceneFrame { t: l(rec.t), ego, agents };
        frame.validate().map_err(|e| Error::Parse { line: line_no, msg: e.to_string() })?;
        Ok(frame)
    }

    pub fn speed_missing(&self) -> bool {
        self.speed_missing
    }
}

/// Parsed header line.
#[derive(Debug, Clone)]
pub struct CaseHeader<T> {
    pub scenario: String,
    pub driver: String,
    pub crash: bool,
    pub road: RoadContext<T>,
}

pub fn parse_header<T: Scalar>(line: &str, line_no: usize) -> Result<CaseHeader<T>> {
    let h: HeaderRecord =
        serde_json::from_str(line).map_err(|e| Error::Parse { line: line_no, msg: format!("bad header: {e}") })?;
    if h.schema != CASE_SCHEMA {
        return Err(Error::Parse { line: line_no, msg: format!("unsupported schema {:?}", h.schema) });
    }
    let road = h.road.unwrap_or_default();
    let l = T::lit;
    let s = road.speed_limits_kmh;
    Ok(CaseHeader {
        scenario: h.scenario,
        driver: h.driver,
        crash: h.crash.unwrap_or(false),
        road: RoadContext {
            speed_limits_kmh: SpeedLimits {
                urban_regular: l(s.urban_regular),
                urban_intersection: l(s.urban_intersection),
                highway_slow: l(s.highway_slow),
                highway_express: l(s.highway_express),
            },
            gradient: l(road.gradient),
            rolling_coeff: l(road.rolling_coeff),
        },
    })
}

/// Reads a case log. Frames must be in strictly increasing time order;
/// irregular sampling (gaps deviating > 10% from the median) is resampled
/// onto the median period.
pub fn parse_case<T: Scalar, R: BufRead>(reader: R) -> Result<DrivingCase<T>> {
    let mut header: Option<CaseHeader<T>> = None;
    let mut decoder = FrameDecoder::default();
    let mut frames: Vec<SceneFrame<T>> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        match header {
            None => header = Some(parse_header(trimmed, line_no)?),
            Some(_) => {
                let frame = decoder.decode(trimmed, line_no)?;
                if let Some(prev) = frames.last() {
                    if !(frame.t > prev.t) {
                        return Err(Error::Validation(format!(
                            "line {line_no}: timestamp {} not after {}",
                            frame.t, prev.t
                        )));
                    }
                }
                frames.push(frame);
            }
        }
    }
    let Some(header) = header else {
        return Err(Error::Validation("fewer than 2 frames".into()));
    };
    let meta = CaseMeta { scenario: header.scenario, driver: header.driver, dt: T::zero() };
    let mut case = DrivingCase::new(frames, meta, header.road)?;
    case.crash = header.crash;
    if decoder.speed_missing() {
        case.speed_source = SpeedSource::Positions;
    }
    Ok(resample_if_irregular(case))
}

pub fn parse_case_str<T: Scalar>(s: &str) -> Result<DrivingCase<T>> {
    parse_case(s.as_bytes())
}

/// Writes a case in the log format. Derived kinematics are not written.
pub fn write_case<T: Scalar, W: Write>(case: &DrivingCase<T>, mut w: W) -> Result<()> {
    let f = |v: T| v.to_f64_lossy();
    let l = &case.road.speed_limits_kmh;
    let header = HeaderRecord {
        schema: CASE_SCHEMA.to_string(),
        scenario: case.meta.scenario.clone(),
        driver: case.meta.driver.clone(),
        crash: case.crash.then_some(true),
        road: Some(RoadContext {
            speed_limits_kmh: SpeedLimits {
                urban_regular: f(l.urban_regular),
                urban_intersection: f(l.urban_intersection),
                highway_slow: f(l.highway_slow),
                highway_express: f(l.highway_express),
            },
            gradient: f(case.road.gradient),
            rolling_coeff: f(case.road.rolling_coeff),
        }),
    };
    serde_json::to_writer(&mut w, &header)?;
    w.write_all(b"\n")?;
    for frame in &case.frames {
        write_frame(frame, &mut w)?;
    }
    Ok(())
}

pub fn write_frame<T: Scalar, W: Write>(frame: &SceneFrame<T>, mut w: W) -> Result<()> {
    let f = |v: T| v.to_f64_lossy();
    let e = &frame.ego.body;
    let rec = FrameRecord {
        t: f(frame.t),
        ego: EgoRecord {
            x: f(e.x),
            y: f(e.y),
            heading: f(e.heading),
            speed: Some(f(e.speed)),
            length: f(e.length),
            width: f(e.width),
            mass: f(e.mass),
            section: frame.ego.section,
        },
        agents: frame
            .agents
            .iter()
            .map(|a| AgentRecord {
                id: a.id.clone(),
                kind: a.kind,
                x: f(a.body.x),
                y: f(a.body.y),
                heading: f(a.body.heading),
                speed: f(a.body.speed),
                v_long: (a.body.v_long != a.body.speed).then(|| f(a.body.v_long)),
                length: f(a.body.length),
                width: f(a.body.width),
                mass: Some(f(a.body.mass)),
            })
            .collect(),
    };
    serde_json::to_writer(&mut w, &rec)?;
    w.write_all(b"\n")?;
    Ok(())
}

pub fn case_to_string<T: Scalar>(case: &DrivingCase<T>) -> String {
    let mut buf = Vec::new();
    write_case(case, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("json is utf-8")
}
