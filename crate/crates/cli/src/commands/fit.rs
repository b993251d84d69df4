use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;

use anyhow::{Context as _, Result};

use s2o_core::fitting::{cross_validate, prepare_dataset, read_rated, FitConfig, FitResult, RatedCase};
use s2o_core::model::ModelFile;
use s2o_core::pipeline::{Level, TERM_NAMES};

use crate::Context;

#[derive(Debug, Clone)]
pub struct FitOutcome {
    pub model: ModelFile,
    pub result: FitResult,
    pub svm_train_accuracy: f64,
    pub cases: usize,
    pub crash_cases: usize,
    pub raters: usize,
    pub kept_raters: Vec<usize>,
}

/// Rater filtering, ground truth, then calibration, classifier and weights
/// fitted on the full set with repeated hold-out validation.
pub fn fit_dataset(cases: &[RatedCase], cfg: &FitConfig) -> Result<FitOutcome> {
    let (prepared, kept_raters) = prepare_dataset(cases, &cfg.rater_filter)?;
    let (full, result) = cross_validate(&prepared, cfg)?;
    Ok(FitOutcome {
        model: ModelFile::new(&full.model),
        result,
        svm_train_accuracy: full.svm_train_accuracy,
        cases: cases.len(),
        crash_cases: cases.iter().filter(|c| c.crash).count(),
        raters: cases.iter().map(|c| c.ratings.len()).max().unwrap_or(0),
        kept_raters,
    })
}

pub fn load_dataset(path: &Path) -> Result<Vec<RatedCase>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_rated(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))
}

pub fn format_report(o: &FitOutcome) -> String {
    let r = &o.result;
    let mut s = String::new();
    let _ = writeln!(s, "cases            {} ({} crashed, excluded from fitting)", o.cases, o.crash_cases);
    let _ = writeln!(s, "raters kept      {} of {}", o.kept_raters.len(), o.raters);
    let _ = writeln!(s, "train MAE        {:.3}", r.train_mae);
    let _ = writeln!(s, "SVM train acc.   {:.3}", o.svm_train_accuracy);
    let _ = writeln!(s, "validation MAE   {:.3} (mean of {} repeats)", r.validation_mae, r.per_repeat.len());
    for (i, m) in r.per_repeat.iter().enumerate() {
        let _ = writeln!(s, "  repeat {}       {m:.3}", i + 1);
    }
    let _ = writeln!(s);
    let _ = write!(s, "{:<8}", "segment");
    for name in TERM_NAMES {
        let _ = write!(s, "{name:>12}");
    }
    let _ = writeln!(s, "{:>12}", "offset");
    for level in Level::ALL {
        let _ = write!(s, "{:<8}", level.name());
        for w in r.weights.row(level).to_array() {
            let _ = write!(s, "{w:>12.4}");
        }
        let _ = writeln!(s, "{:>12.4}", r.weights.offset);
    }
    s
}

pub fn run(ctx: &Context, dataset: &Path, report: Option<&Path>) -> Result<()> {
    let cases = load_dataset(dataset)?;
    let outcome = fit_dataset(&cases, &ctx.config.fit)?;
    let mut w = ctx.writer()?;
    w.write_all(outcome.model.to_json().as_bytes())?;
    w.flush()?;
    let text = format_report(&outcome);
    match report {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => eprint!("{text}"),
    }
    Ok(())
}
