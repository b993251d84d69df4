use std::io::{self, BufRead, Write};

use anyhow::{bail, Result};

use s2o_core::pipeline::StreamEvaluator;
use s2o_core::trajectory::{parse_header, FrameDecoder, RoadContext, SpeedSource};
use s2o_core::{Model, Stream};

use crate::config::Config;
use crate::records::{StreamBody, StreamRecord};
use crate::Context;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StreamSummary {
    pub lines: usize,
    pub reports: usize,
    pub errors: usize,
}

fn emit<W: Write>(out: &mut W, body: StreamBody) -> Result<()> {
    serde_json::to_writer(&mut *out, &StreamRecord::new(body))?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

fn looks_like_header(line: &str) -> bool {
    serde_json::from_str::<serde_json::Value>(line).is_ok_and(|v| v.get("schema").is_some())
}

/// Reads case-log lines from `input` and writes one record per line that
/// produced a report or an error. An optional header line may come first.
/// With `strict`, the first error ends the stream.
pub fn stream<R: BufRead, W: Write>(input: R, mut out: W, cfg: &Config, model: &Model, strict: bool) -> Result<StreamSummary> {
    let mut summary = StreamSummary::default();
    let mut road = RoadContext::default();
    let mut crash = false;
    let mut decoder = FrameDecoder::default();
    let mut evaluator: Option<Stream> = None;
    let mut first = true;

    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        summary.lines += 1;
        let result: Result<Option<StreamBody>> = (|| {
            if first && looks_like_header(text) {
                let h = parse_header::<f64>(text, line_no)?;
                road = h.road;
                crash = h.crash;
                return Ok(None);
            }
            let frame = decoder.decode::<f64>(text, line_no)?;
            let ev = evaluator.get_or_insert_with(|| {
                let source = if decoder.speed_missing() { SpeedSource::Positions } else { SpeedSource::Logged };
                let mut s = StreamEvaluator::new(cfg.eval, *model, road).with_speed_source(source);
                s.set_crash(crash);
                s
            });
            Ok(ev.push(frame)?.map(|r| StreamBody::Report { frame: r.frame, t: r.t, report: r.report }))
        })();
        first = false;
        match result {
            Ok(Some(body)) => {
                emit(&mut out, body)?;
                summary.reports += 1;
            }
            Ok(None) => {}
            Err(e) => {
                summary.errors += 1;
                let message = format!("{e:#}");
                emit(&mut out, StreamBody::Error { line: line_no, message: message.clone() })?;
                if strict {
                    bail!("line {line_no}: {message}");
                }
            }
        }
    }
    Ok(summary)
}

pub fn run(ctx: &Context) -> Result<()> {
    let stdin = io::stdin();
    let summary = stream(stdin.lock(), ctx.writer()?, &ctx.config, &ctx.model.model(), ctx.strict)?;
    if summary.errors > 0 {
        log::warn!("{} of {} lines rejected", summary.errors, summary.lines);
    }
    Ok(())
}
