//! Feature-space probe: paired cosine similarity between original-sentence
//! and variant-sentence features exported by an external model, before and
//! after its fusion stage, summarized as densities and shift statistics.

mod matrix;
mod pdf;
mod stages;

pub use matrix::{load_matrix, write_matrix, FeatureMatrix};
pub use pdf::{histogram_pdf, kde_pdf, PdfCurve};
pub use stages::{
    compare_stages, paired_cosine, paired_cosine_with, stage_stats, PairedCosine, ProbeReport, StageStats, DEFAULT_BINS,
    DEFAULT_TAU, RELATIVE_NOTE,
};

#[derive(Debug, thiserror::Error)]
pub enum ProbeError {
    #[error("{0}")]
    Io(String),
    #[error("line {line}: expected {expected} values, found {got}")]
    Ragged { line: usize, expected: usize, got: usize },
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("line {line}, column {column}: `{value}` is not a number")]
    NonNumeric { line: usize, column: usize, value: String },
    #[error("matrix has no rows")]
    Empty,
    #[error("no values")]
    EmptyValues,
    #[error("ids differ: missing {missing:?}, extra {extra:?}")]
    IdMismatch { missing: Vec<String>, extra: Vec<String> },
    #[error("{0}")]
    Shape(String),
}
