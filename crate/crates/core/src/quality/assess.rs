use serde::{Deserialize, Serialize};

use super::edit::EditGranularity;
use super::embedding::{cosine, sentence_vector_static, EmbeddingTable};
use super::QualityError;
use crate::corpus::{align, DatasetSplit, VariantStyle};
use crate::diversity::word_tokens;
use crate::providers::EmbeddingProvider;
use crate::Execution;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AssessOptions {
    pub granularity: EditGranularity,
    pub exec: Execution,
}

/// Statistics for one aligned (original, variant) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairQuality {
    pub id: String,
    pub edit_distance: f64,
    /// `None` when either sentence has no in-vocabulary token.
    pub static_sim: Option<f64>,
    pub neural_sim: Option<f64>,
    pub oov_tokens: usize,
    pub tokens: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityRow {
    pub style: VariantStyle,
    /// Absent when no neural provider was configured.
    pub mean_neural_sim: Option<f64>,
    /// Absent when no pair had a static vector on both sides.
    pub mean_static_sim: Option<f64>,
    pub mean_edit_distance: f64,
    pub n: usize,
    /// Out-of-vocabulary share of all word tokens on both sides.
    pub oov_rate: f64,
    /// Pairs left out of the static mean.
    pub static_excluded: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityReport {
    pub edit_distance: String,
    pub static_model: Option<String>,
    pub neural_model: Option<String>,
    pub rows: Vec<QualityRow>,
}

impl QualityReport {
    pub fn new(granularity: EditGranularity) -> Self {
        Self { edit_distance: granularity.describe().to_string(), static_model: None, neural_model: None, rows: Vec::new() }
    }

    /// Columns: style, neural_sim, static_sim, ed. A leading `#` line records
    /// the edit-distance convention. Absent values are empty cells.
    pub fn to_csv(&self) -> String {
        let cell = |v: Option<f64>| v.map(|x| format!("{x:.4}")).unwrap_or_default();
        let mut out = format!("# ed: {}\nstyle,neural_sim,static_sim,ed\n", self.edit_distance);
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{:.4}\n",
                r.style,
                cell(r.mean_neural_sim),
                cell(r.mean_static_sim),
                r.mean_edit_distance
            ));
        }
        out
    }
}

/// Per-pair statistics in original-split order.
pub fn assess_pairs(
    original: &DatasetSplit,
    variant: &DatasetSplit,
    table: &EmbeddingTable,
    neural: Option<&dyn EmbeddingProvider>,
    opts: &AssessOptions,
) -> Result<Vec<PairQuality>, QualityError> {
    let pairs = align(original, variant)?;
    let mut out = opts.exec.map(&pairs, |(o, v)| {
        let a = word_tokens(&o.sentence);
        let b = word_tokens(&v.sentence);
        let sa = sentence_vector_static(&a, table);
        let sb = sentence_vector_static(&b, table);
        let oov = sa.as_ref().map(|x| x.1).unwrap_or(a.len()) + sb.as_ref().map(|x| x.1).unwrap_or(b.len());
        let static_sim = match (sa, sb) {
            (Ok((u, _)), Ok((w, _))) => cosine(&u, &w).ok(),
            _ => None,
        };
        PairQuality {
            id: o.id.clone(),
            edit_distance: opts.granularity.distance(&o.sentence, &v.sentence),
            static_sim,
            neural_sim: None,
            oov_tokens: oov,
            tokens: a.len() + b.len(),
        }
    });

    if let Some(provider) = neural {
        let texts: Vec<String> = pairs.iter().flat_map(|(o, v)| [o.sentence.clone(), v.sentence.clone()]).collect();
        let vectors = provider.embed(&texts)?;
        if vectors.len() != texts.len() {
            return Err(QualityError::Provider(crate::providers::ProviderError::Malformed(format!(
                "expected {} embeddings, got {}",
                texts.len(),
                vectors.len()
            ))));
        }
        for (i, p) in out.iter_mut().enumerate() {
            match cosine(&vectors[2 * i], &vectors[2 * i + 1]) {
                Ok(s) => p.neural_sim = Some(s),
                Err(e) => log::warn!("pair {}: neural similarity skipped: {e}", p.id),
            }
        }
    }
    Ok(out)
}

/// Aggregates pair statistics into one report row. Sums run in id order so
/// the result does not depend on record order.
pub fn summarize(style: VariantStyle, pairs: &[PairQuality], neural: bool) -> QualityRow {
    let mut sorted: Vec<&PairQuality> = pairs.iter().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));
    let mean = |xs: Vec<f64>| if xs.is_empty() { None } else { Some(xs.iter().sum::<f64>() / xs.len() as f64) };

    let statics: Vec<f64> = sorted.iter().filter_map(|p| p.static_sim).collect();
    let neurals: Vec<f64> = sorted.iter().filter_map(|p| p.neural_sim).collect();
    let tokens: usize = sorted.iter().map(|p| p.tokens).sum();
    let oov: usize = sorted.iter().map(|p| p.oov_tokens).sum();
    QualityRow {
        style,
        mean_neural_sim: if neural { mean(neurals) } else { None },
        static_excluded: sorted.len() - statics.len(),
        mean_static_sim: mean(statics),
        mean_edit_distance: mean(sorted.iter().map(|p| p.edit_distance).collect()).unwrap_or(0.0),
        n: sorted.len(),
        oov_rate: if tokens == 0 { 0.0 } else { oov as f64 / tokens as f64 },
    }
}

/// Quality of one variant split against its original.
pub fn assess(
    original: &DatasetSplit,
    variant: &DatasetSplit,
    table: &EmbeddingTable,
    neural: Option<&dyn EmbeddingProvider>,
    opts: &AssessOptions,
) -> Result<QualityRow, QualityError> {
    let pairs = assess_pairs(original, variant, table, neural, opts)?;
    Ok(summarize(variant.style, &pairs, neural.is_some()))
}
