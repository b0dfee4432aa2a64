//! Task metrics for grounding and question answering, and robustness
//! reports comparing variant-split scores against the original split.

mod iou;
mod predict;
mod report;
mod task;
mod text;

pub use iou::iou3d;
pub use predict::{load_predictions, match_predictions, save_predictions, Payload, Prediction};
pub use report::{build_report, reports_to_csv, RobustnessReport};
pub use task::{acc_at_kiou, exact_match_at_k, listening_accuracy, split_bleu1, split_cider, Metric};
pub use text::{answer_tokens, bleu1, cider, cider_items, corpus_bleu1, normalize_answer, CIDER_MAX_N};

use crate::corpus::{TaskKind, VariantStyle};

/// Noted in evaluation output so readers know which variants are computed.
pub const METRIC_CONVENTIONS: &str = "BLEU-1 includes the brevity penalty; CIDEr is the original formulation without the length penalty";

#[derive(Debug, thiserror::Error)]
pub enum MetricsError {
    #[error("predictions do not match the split: missing ids {missing:?}, extra ids {extra:?}")]
    IdMismatch { missing: Vec<String>, extra: Vec<String> },
    #[error("duplicate prediction for `{0}`")]
    DuplicatePrediction(String),
    #[error("prediction `{id}` carries `{payload}`, which does not fit task kind {task_kind:?}")]
    PayloadMismatch { id: String, payload: &'static str, task_kind: TaskKind },
    #[error("record `{0}` has a target that does not fit the metric")]
    TargetMismatch(String),
    #[error("prediction `{id}`: index {index} outside 0..{candidate_count}")]
    IndexOutOfRange { id: String, index: i64, candidate_count: usize },
    #[error("`{0}` has no answers")]
    EmptyAnswers(String),
    #[error("CIDEr needs at least 2 items, got {0}")]
    CorpusTooSmall(usize),
    #[error("split is empty")]
    EmptySplit,
    #[error("no score for the {0} split")]
    MissingStyle(VariantStyle),
    #[error("{0}")]
    InvalidParameter(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Io(String),
}
