//! Syntax-diversity profiling: tokenize, tag, chunk into structure strings,
//! vectorize with TF-IDF, project with PCA and estimate a 2D density grid.

mod chunk;
mod kde;
mod pca;
mod profile;
mod tagger;
mod tfidf;
mod tokenize;

pub use chunk::{chunk_signature, SyntaxSignature};
pub use kde::{gaussian_kernel, kde_1d, kde_grid, kde_grid_with, BandwidthRule, DensityGrid, KdeOptions};
pub use pca::{pca2, Pca2};
pub use profile::{corpus_stats, profile, signature_of, signatures_with, CorpusStats, DiversityOptions, DiversityProfile, DiversitySummary};
pub(crate) use profile::csv_field;
pub use tagger::{LexiconTagger, PosTag, TagSequence, Tagger};
pub use tfidf::{smoothed_idf, tfidf_fit, tfidf_fit_min_df, tfidf_transform, tfidf_transform_with, TfIdfMatrix, TfIdfModel};
pub use tokenize::{is_punct_token, tokenize, word_tokens};

#[derive(Debug, thiserror::Error)]
pub enum DiversityError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("need at least 2 rows and 2 columns, got {rows}x{cols}")]
    TooSmall { rows: usize, cols: usize },
    #[error("all rows are identical; no variance to project")]
    ZeroVariance,
    #[error("tagger asset: {0}")]
    Asset(String),
    #[error("{0}")]
    InvalidOption(String),
}
