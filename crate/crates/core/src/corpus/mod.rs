//! Dataset records, splits, and split-level operations: JSON Lines I/O,
//! stratified subsampling, original/variant alignment and augmented
//! training-set construction.

mod align;
mod io;
mod record;
mod sample;

use std::path::{Path, PathBuf};

pub use align::{align, build_augmented_training, style_counts, AugmentMode, AUGMENTED_ID_SEPARATOR};
pub use io::{load_split, save_split};
pub use record::{
    Box3D, DatasetSplit, Difficulty, Provenance, Record, RecordMeta, StratumKey, Target, TaskKind, VariantStyle, View,
    DEFAULT_DIFFICULTY_THRESHOLD,
};
pub use sample::{largest_remainder, seeded_rng, subsample, subsample_with, target_count, SubsampleOptions};

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("{path}: {error}")]
    Io { path: PathBuf, error: std::io::Error },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("duplicate record id `{0}`")]
    DuplicateId(String),
    #[error("record `{id}`: target does not match task kind {task_kind:?}")]
    TargetMismatch { id: String, task_kind: TaskKind },
    #[error("record `{id}`: {reason}")]
    InvalidRecord { id: String, reason: String },
    #[error("unknown style `{0}`")]
    UnknownStyle(String),
    #[error("split is empty")]
    EmptySplit,
    #[error("fraction must be in (0, 1], got {0}")]
    InvalidFraction(f64),
    #[error("expected a variant split, got an original split")]
    NotAVariant,
    #[error("{style} split does not align with the original: missing ids {missing:?}, extra ids {extra:?}")]
    Misaligned {
        style: VariantStyle,
        missing: Vec<String>,
        extra: Vec<String>,
    },
    #[error("no {0} split supplied")]
    MissingStyle(VariantStyle),
    #[error("{0} split supplied more than once")]
    DuplicateStyle(VariantStyle),
}

impl CorpusError {
    pub(crate) fn io(path: &Path, error: std::io::Error) -> Self {
        CorpusError::Io { path: path.to_path_buf(), error }
    }
}
