use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::chunk::{chunk_signature, SyntaxSignature};
use super::kde::{kde_grid_with, DensityGrid, KdeOptions};
use super::pca::{pca2, Pca2};
use super::tagger::Tagger;
use super::tfidf::{tfidf_fit_min_df, tfidf_transform_with};
use super::tokenize::{tokenize, word_tokens};
use super::DiversityError;
use crate::Execution;

/// Unique words, total words and mean sentence length (punctuation excluded).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub sentences: usize,
    pub unique_words: usize,
    pub total_words: usize,
    pub avg_length: f64,
}

pub fn corpus_stats<S: AsRef<str>>(sentences: &[S]) -> CorpusStats {
    let mut vocab = HashSet::new();
    let mut total = 0;
    for s in sentences {
        let words = word_tokens(s.as_ref());
        total += words.len();
        vocab.extend(words);
    }
    CorpusStats {
        sentences: sentences.len(),
        unique_words: vocab.len(),
        total_words: total,
        avg_length: if sentences.is_empty() { 0.0 } else { total as f64 / sentences.len() as f64 },
    }
}

/// Tokenize, tag and chunk one sentence.
pub fn signature_of(text: &str, tagger: &dyn Tagger) -> SyntaxSignature {
    chunk_signature(&tagger.tag(&tokenize(text)))
}

pub fn signatures_with<S: AsRef<str> + Sync>(texts: &[S], tagger: &dyn Tagger, exec: Execution) -> Vec<SyntaxSignature> {
    exec.map(texts, |t| signature_of(t.as_ref(), tagger))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiversityOptions {
    /// Minimum document frequency for a structure term to be kept.
    pub min_df: usize,
    pub kde: KdeOptions,
    pub exec: Execution,
}

impl Default for DiversityOptions {
    fn default() -> Self {
        Self { min_df: 2, kde: KdeOptions::default(), exec: Execution::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiversityProfile {
    pub ids: Vec<String>,
    pub signatures: Vec<SyntaxSignature>,
    pub vocabulary_size: usize,
    pub pca: Pca2,
    pub grid: DensityGrid,
    pub stats: CorpusStats,
}

/// Summary written next to the grid and point files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiversitySummary {
    pub stats: CorpusStats,
    pub distinct_signatures: usize,
    pub vocabulary_size: usize,
    pub explained_variance: [f64; 2],
    pub explained_variance_ratio: [f64; 2],
    pub bandwidth: [f64; 2],
    pub tokenizer: String,
    pub structure: String,
}

/// Full syntax-diversity profile: signatures, TF-IDF, 2D PCA and density grid.
pub fn profile(ids: &[String], texts: &[String], tagger: &dyn Tagger, opts: &DiversityOptions) -> Result<DiversityProfile, DiversityError> {
    if ids.len() != texts.len() {
        return Err(DiversityError::InvalidOption("ids and texts differ in length".into()));
    }
    if texts.is_empty() {
        return Err(DiversityError::EmptyCorpus);
    }
    let signatures = signatures_with(texts, tagger, opts.exec);
    let mut model = tfidf_fit_min_df(&signatures, opts.min_df)?;
    if model.dim() < 2 && opts.min_df > 1 {
        log::warn!("fewer than 2 structure terms with df >= {}; keeping all terms", opts.min_df);
        model = tfidf_fit_min_df(&signatures, 1)?;
    }
    let tfidf = tfidf_transform_with(&model, &signatures, opts.exec);
    if !tfidf.zero_rows.is_empty() {
        log::warn!("{} sentences have no retained structure terms", tfidf.zero_rows.len());
    }
    let pca = pca2(&tfidf.matrix)?;
    let grid = kde_grid_with(&pca.points, &opts.kde, opts.exec)?;
    Ok(DiversityProfile {
        ids: ids.to_vec(),
        vocabulary_size: model.dim(),
        signatures,
        pca,
        grid,
        stats: corpus_stats(texts),
    })
}

impl DiversityProfile {
    pub fn summary(&self) -> DiversitySummary {
        let distinct: HashSet<&SyntaxSignature> = self.signatures.iter().collect();
        DiversitySummary {
            stats: self.stats.clone(),
            distinct_signatures: distinct.len(),
            vocabulary_size: self.vocabulary_size,
            explained_variance: self.pca.explained_variance,
            explained_variance_ratio: self.pca.explained_variance_ratio,
            bandwidth: self.grid.bandwidth,
            tokenizer: "lowercase; whitespace split; punctuation as separate tokens".into(),
            structure: "lexicon+suffix tagger over 12 universal tags; greedy NP/PP/VP chunk grammar".into(),
        }
    }

    /// CSV with columns `id,pc1,pc2`.
    pub fn points_csv(&self) -> String {
        let mut out = String::from("id,pc1,pc2\n");
        for (id, [a, b]) in self.ids.iter().zip(&self.pca.points) {
            out.push_str(&format!("{},{a},{b}\n", csv_field(id)));
        }
        out
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
