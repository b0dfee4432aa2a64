use std::collections::{BTreeMap, BTreeSet, HashMap};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::chunk::SyntaxSignature;
use super::DiversityError;

/// Fitted TF-IDF vocabulary with smoothed idf:
/// `idf(t) = ln((1 + N) / (1 + df(t))) + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfIdfModel {
    /// Term to column index; columns are in lexicographic term order.
    pub vocabulary: BTreeMap<String, usize>,
    pub idf: Vec<f64>,
    pub n_docs: usize,
}

/// Row-normalized document-term matrix. Rows whose terms were all unseen at
/// fit time stay zero and are listed in `zero_rows`.
#[derive(Debug, Clone, PartialEq)]
pub struct TfIdfMatrix {
    pub matrix: DMatrix<f64>,
    pub zero_rows: Vec<usize>,
}

pub fn smoothed_idf(n_docs: usize, df: usize) -> f64 {
    ((1.0 + n_docs as f64) / (1.0 + df as f64)).ln() + 1.0
}

/// Fits on the given documents keeping every term.
pub fn tfidf_fit(docs: &[SyntaxSignature]) -> Result<TfIdfModel, DiversityError> {
    tfidf_fit_min_df(docs, 1)
}

/// Fits keeping only terms that occur in at least `min_df` documents.
pub fn tfidf_fit_min_df(docs: &[SyntaxSignature], min_df: usize) -> Result<TfIdfModel, DiversityError> {
    if docs.is_empty() {
        return Err(DiversityError::EmptyCorpus);
    }
    let mut df: BTreeMap<String, usize> = BTreeMap::new();
    for doc in docs {
        let unique: BTreeSet<String> = doc.terms().into_iter().collect();
        for term in unique {
            *df.entry(term).or_insert(0) += 1;
        }
    }
    let kept: Vec<(String, usize)> = df.into_iter().filter(|(_, d)| *d >= min_df.max(1)).collect();
    let n_docs = docs.len();
    let idf = kept.iter().map(|(_, d)| smoothed_idf(n_docs, *d)).collect();
    let vocabulary = kept.into_iter().enumerate().map(|(i, (t, _))| (t, i)).collect();
    Ok(TfIdfModel { vocabulary, idf, n_docs })
}

impl TfIdfModel {
    pub fn dim(&self) -> usize {
        self.idf.len()
    }

    /// Weighted term counts of one document, L2-normalized. Returns `None`
    /// for a document with no known terms.
    pub fn transform_one(&self, doc: &SyntaxSignature) -> Option<Vec<f64>> {
        let mut counts: HashMap<usize, f64> = HashMap::new();
        for term in doc.terms() {
            if let Some(&col) = self.vocabulary.get(&term) {
                *counts.entry(col).or_insert(0.0) += 1.0;
            }
        }
        let mut row = vec![0.0; self.dim()];
        for (col, tf) in counts {
            row[col] = tf * self.idf[col];
        }
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return None;
        }
        row.iter_mut().for_each(|v| *v /= norm);
        Some(row)
    }
}

pub fn tfidf_transform(model: &TfIdfModel, docs: &[SyntaxSignature]) -> TfIdfMatrix {
    tfidf_transform_with(model, docs, crate::Execution::default())
}

pub fn tfidf_transform_with(model: &TfIdfModel, docs: &[SyntaxSignature], exec: crate::Execution) -> TfIdfMatrix {
    let rows = exec.map(docs, |d| model.transform_one(d));
    let d = model.dim();
    let mut matrix = DMatrix::zeros(docs.len(), d);
    let mut zero_rows = Vec::new();
    for (i, row) in rows.into_iter().enumerate() {
        match row {
            Some(values) => {
                for (j, v) in values.into_iter().enumerate() {
                    matrix[(i, j)] = v;
                }
            }
            None => zero_rows.push(i),
        }
    }
    TfIdfMatrix { matrix, zero_rows }
}
