use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context as _, Result};
use rayon::prelude::*;

use s2o_core::harness::{builtin_scenarios, generate_corpus, generate_scenario, planner_by_name, run_closed_loop, ConstantAccelPlanner, Planner, ScenarioSpec};
use s2o_core::trajectory::write_case;
use s2o_core::Case;

use crate::Context;

/// `idm`, `conservative`, `aggressive`, or `constant-accel:<accel>`.
pub fn planner_from_name(name: &str) -> Result<Box<dyn Planner>> {
    if let Some(a) = name.strip_prefix("constant-accel:") {
        let accel: f64 = a.parse().map_err(|_| anyhow!("bad acceleration in planner {name:?}"))?;
        if !accel.is_finite() {
            bail!("bad acceleration in planner {name:?}");
        }
        return Ok(Box::new(ConstantAccelPlanner::new(accel)));
    }
    planner_by_name(name).ok_or_else(|| anyhow!("unknown planner {name:?}"))
}

pub fn simulate_spec(spec: &ScenarioSpec, planner: &str) -> Result<Case> {
    let world = generate_scenario(spec)?;
    let mut p = planner_from_name(planner)?;
    Ok(run_closed_loop(&world, p.as_mut(), world.dt, world.duration)?)
}

pub fn load_spec(path: &Path) -> Result<ScenarioSpec> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    ScenarioSpec::from_toml(&text).with_context(|| format!("scenario {}", path.display()))
}

fn file_name(name: &str) -> String {
    let clean: String = name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect();
    format!("{clean}.jsonl")
}

pub fn write_case_file(path: &Path, case: &Case) -> Result<()> {
    let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    write_case(case, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn run(ctx: &Context, spec_files: &[PathBuf], builtin: bool, corpus: Option<usize>, planner: &str) -> Result<()> {
    let Some(dir) = ctx.output.as_deref() else {
        bail!("simulate needs --output DIR");
    };
    planner_from_name(planner)?;
    let mut specs = spec_files.iter().map(|p| load_spec(p)).collect::<Result<Vec<_>>>()?;
    if builtin {
        specs.extend(builtin_scenarios());
    }
    if specs.is_empty() && corpus.is_none() {
        bail!("nothing to simulate: give spec files, --builtin or --corpus");
    }
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;

    let cases = specs.par_iter().map(|s| simulate_spec(s, planner)).collect::<Result<Vec<_>>>()?;
    let mut jobs: Vec<(String, Case)> = specs.iter().map(|s| s.display_name()).zip(cases).collect();
    if let Some(n) = corpus {
        let generated = generate_corpus(n, ctx.config.seed)?;
        jobs.extend(generated.into_iter().enumerate().map(|(i, c)| (format!("corpus-{i:05}"), c)));
    }
    for (name, case) in &jobs {
        let path = dir.join(file_name(name));
        write_case_file(&path, case)?;
        log::info!("wrote {} ({} frames{})", path.display(), case.frames.len(), if case.crash { ", crashed" } else { "" });
    }
    Ok(())
}
