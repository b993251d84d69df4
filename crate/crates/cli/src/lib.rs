//! Command-line workflows over `s2o-core`: batch and live scoring, model
//! fitting, scenario simulation and safety-field heatmaps.

pub mod cli;
pub mod commands;
pub mod config;
pub mod records;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context as _, Result};

use s2o_core::model::{default_model_file, ModelFile};

pub use cli::{Cli, Command, GlobalArgs};
pub use config::Config;

/// Everything a command needs after flag and config resolution.
#[derive(Debug, Clone)]
pub struct Context {
    pub config: Config,
    pub model: ModelFile,
    pub strict: bool,
    pub output: Option<PathBuf>,
}

impl Context {
    pub fn from_args(g: &GlobalArgs) -> Result<Self> {
        let mut config = Config::resolve(g.config.as_deref())?;
        if let Some(seed) = g.seed {
            config.seed = seed;
            config.fit.seed = seed;
        }
        let model = match g.model.as_deref().or(config.model.as_deref()) {
            Some(p) => ModelFile::load(p).with_context(|| format!("loading model {}", p.display()))?,
            None => default_model_file(),
        };
        Ok(Context { config, model, strict: g.strict, output: g.output.clone() })
    }

    /// The output file, or standard output.
    pub fn writer(&self) -> Result<Box<dyn Write>> {
        open_output(self.output.as_deref())
    }
}

pub fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn run(cli: Cli) -> Result<()> {
    let ctx = Context::from_args(&cli.global)?;
    match cli.command {
        Command::Evaluate { inputs } => commands::evaluate::run(&ctx, &inputs),
        Command::Stream => commands::stream::run(&ctx),
        Command::Fit { dataset, report } => commands::fit::run(&ctx, &dataset, report.as_deref()),
        Command::Simulate { specs, builtin, corpus, planner } => commands::simulate::run(&ctx, &specs, builtin, corpus, &planner),
        Command::Heatmap { case, frame, cell, rows, cols } => commands::heatmap::run(&ctx, &case, frame, cell, rows, cols),
    }
}
