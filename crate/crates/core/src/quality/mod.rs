//! Meaning-preservation checks between an original split and a variant:
//! normalized edit distance, static word-vector similarity and neural
//! sentence-embedding similarity.

mod assess;
mod edit;
mod embedding;

pub use assess::{assess, assess_pairs, summarize, AssessOptions, PairQuality, QualityReport, QualityRow};
pub use edit::{levenshtein, normalized_edit_distance, EditGranularity};
pub use embedding::{cosine, sentence_vector_static, EmbeddingTable};

use crate::corpus::CorpusError;
use crate::providers::ProviderError;

#[derive(Debug, thiserror::Error)]
pub enum QualityError {
    #[error("every token is out of vocabulary")]
    AllOov,
    #[error("zero-norm vector")]
    ZeroNorm,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("embedding table: {0}")]
    Table(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Provider(#[from] ProviderError),
}
