use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context as _, Result};
use rayon::prelude::*;

use s2o_core::pipeline::evaluate_case;
use s2o_core::trajectory::parse_case;
use s2o_core::{Case, Model};

use crate::config::Config;
use crate::records::{CaseRecord, REPORT_SCHEMA};
use crate::Context;

pub const CASE_EXTENSION: &str = "jsonl";

/// Expands directories to their `*.jsonl` files (not recursive), then
/// sorts and dedups.
pub fn collect_inputs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in inputs {
        if p.is_dir() {
            for entry in std::fs::read_dir(p).with_context(|| format!("listing {}", p.display()))? {
                let path = entry?.path();
                if path.is_file() && path.extension().is_some_and(|e| e == CASE_EXTENSION) {
                    out.push(path);
                }
            }
        } else {
            out.push(p.clone());
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

pub fn load_case(path: &Path) -> Result<Case> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(parse_case(BufReader::new(file))?)
}

pub fn evaluate_file(path: &Path, cfg: &Config, model: &Model) -> Result<CaseRecord> {
    let case = cfg.prepare(load_case(path)?);
    let report = evaluate_case(&case, &cfg.eval, model)?;
    Ok(CaseRecord {
        schema: REPORT_SCHEMA.to_string(),
        case: path.display().to_string(),
        scenario: case.meta.scenario.clone(),
        driver: case.meta.driver.clone(),
        frames: case.frames.len(),
        report,
    })
}

#[derive(Debug, Default)]
pub struct EvalOutcome {
    pub records: Vec<CaseRecord>,
    pub failures: Vec<(PathBuf, String)>,
}

/// Scores `paths` in parallel; results keep the order of `paths`.
pub fn evaluate_paths(paths: &[PathBuf], cfg: &Config, model: &Model) -> EvalOutcome {
    let results: Vec<Result<CaseRecord>> = paths.par_iter().map(|p| evaluate_file(p, cfg, model)).collect();
    let mut out = EvalOutcome::default();
    for (p, r) in paths.iter().zip(results) {
        match r {
            Ok(rec) => out.records.push(rec),
            Err(e) => out.failures.push((p.clone(), format!("{e:#}"))),
        }
    }
    out
}

pub fn write_records<W: Write>(mut w: W, records: &[CaseRecord]) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn run(ctx: &Context, inputs: &[PathBuf]) -> Result<()> {
    let paths = collect_inputs(inputs)?;
    if paths.is_empty() {
        bail!("no case files found");
    }
    let model = ctx.model.model();
    let outcome = evaluate_paths(&paths, &ctx.config, &model);
    for (p, msg) in &outcome.failures {
        eprintln!("error: {}: {msg}", p.display());
    }
    let failed = outcome.failures.len();
    if failed > 0 && ctx.strict {
        bail!("{failed} of {} cases failed; no reports written (--strict)", paths.len());
    }
    if outcome.records.is_empty() {
        bail!("none of the {} cases could be evaluated", paths.len());
    }
    write_records(ctx.writer()?, &outcome.records)?;
    if failed > 0 {
        log::warn!("{failed} of {} cases skipped", paths.len());
    }
    Ok(())
}
