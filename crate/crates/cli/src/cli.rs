use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "s2o", version, about = "Score driving decision-making cases")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// Config file (TOML). Falls back to $S2O_CONFIG.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Model file; defaults to the config entry, then the built-in model.
    #[arg(long, global = true, value_name = "PATH")]
    pub model: Option<PathBuf>,
    /// Overrides every seed in the config.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Fail on the first invalid input instead of skipping it.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Output file, or directory for `simulate`. Standard output when absent.
    #[arg(long, short, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score case logs; directories are scanned for *.jsonl files.
    Evaluate {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Score frames from standard input as they arrive.
    Stream,
    /// Fit a model file from a rated dataset.
    Fit {
        dataset: PathBuf,
        /// Where to write the text fit report; standard error when absent.
        #[arg(long, value_name = "PATH")]
        report: Option<PathBuf>,
    },
    /// Run closed-loop scenarios and write case logs.
    Simulate {
        /// Scenario spec files (TOML).
        specs: Vec<PathBuf>,
        /// Also run the eight built-in scenes.
        #[arg(long)]
        builtin: bool,
        /// Also write this many randomized corpus cases.
        #[arg(long, value_name = "N")]
        corpus: Option<usize>,
        /// idm, conservative, aggressive or constant-accel:<m/s^2>.
        #[arg(long, default_value = "idm")]
        planner: String,
    },
    /// Rasterize the safety field around the ego for one frame (CSV).
    Heatmap {
        case: PathBuf,
        #[arg(long, default_value_t = 0)]
        frame: usize,
        #[arg(long)]
        cell: Option<f64>,
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long)]
        cols: Option<usize>,
    },
}
