//! From raw factor scores to the final crash-revised score.

mod evaluate;
mod integrate;
mod segment;
mod stream;
mod terms;

pub use evaluate::{evaluate_case, raw_terms, score_terms, EvalParams, EvaluationReport, ScoringModel};
pub use integrate::{crash_revision, integrate, SegmentWeights, WeightRow};
pub use segment::{classify_segment, Hyperplane, Level, LinearSvmModel, LOW_UPPER, MID_UPPER};
pub use stream::{StreamEvaluator, StreamReport};
pub use terms::{normalize, CalibrationTable, NormalizedScores, TermRange, TermScores, TERM_NAMES};
