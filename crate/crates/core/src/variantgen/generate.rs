use serde::{Deserialize, Serialize};

use super::parse::parse_response;
use super::template::{render_prompt, PromptTemplate};
use super::VariantGenError;
use crate::corpus::{DatasetSplit, Provenance, Record, VariantStyle};
use crate::diversity::tokenize;
use crate::exec::bounded_map;
use crate::providers::{ChatProvider, CompletionRequest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OnFailure {
    /// Keep the original sentence and mark the row as flagged.
    FlagAndKeepOriginal,
    /// Omit the row. A split with omitted rows no longer aligns, so
    /// `generate_split` reports it as an error.
    Drop,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenerationPolicy {
    pub max_parse_retries: u32,
    pub temperature: f64,
    pub max_tokens: u32,
    pub on_failure: OnFailure,
    /// Concurrent provider calls in `generate_split`.
    pub workers: usize,
}

impl Default for GenerationPolicy {
    fn default() -> Self {
        Self { max_parse_retries: 2, temperature: 0.7, max_tokens: 256, on_failure: OnFailure::FlagAndKeepOriginal, workers: 4 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariantRecord {
    pub original_id: String,
    pub style: VariantStyle,
    pub sentence: String,
    pub tokens: Vec<String>,
    pub model_id: String,
    pub attempts: u32,
    pub flagged: bool,
}

impl VariantRecord {
    /// The original record with this variant's sentence and provenance.
    pub fn into_record(self, original: &Record) -> Record {
        let mut r = original.clone();
        r.sentence = self.sentence;
        r.tokens = self.tokens;
        r.provenance = Some(Provenance {
            model_id: Some(self.model_id),
            attempts: Some(self.attempts),
            flagged: Some(self.flagged),
            ..Provenance::default()
        });
        r
    }
}

/// Rephrases one record into `style`.
///
/// Up to `max_parse_retries + 1` provider calls are made until a reply parses.
/// Returns `Ok(None)` when every attempt failed and the policy drops rows.
/// Provider errors are returned as they occur.
pub fn generate_variant(
    record: &Record,
    style: VariantStyle,
    provider: &dyn ChatProvider,
    policy: &GenerationPolicy,
    template: &PromptTemplate,
) -> Result<Option<VariantRecord>, VariantGenError> {
    let messages = render_prompt(style, &record.sentence, template)?;
    let request = CompletionRequest {
        model_id: provider.model_id().to_string(),
        messages,
        temperature: policy.temperature,
        max_tokens: policy.max_tokens,
    };
    let budget = policy.max_parse_retries + 1;
    for attempt in 1..=budget {
        let reply = provider.complete(&request)?;
        match parse_response(&reply) {
            Ok(sentence) => {
                return Ok(Some(VariantRecord {
                    original_id: record.id.clone(),
                    style,
                    tokens: tokenize(&sentence),
                    sentence,
                    model_id: request.model_id.clone(),
                    attempts: attempt,
                    flagged: false,
                }))
            }
            Err(e) => log::debug!("record {}: unparseable reply on attempt {attempt}: {e}", record.id),
        }
    }
    log::warn!("record {}: no parseable {style} rephrasing after {budget} attempts", record.id);
    Ok(match policy.on_failure {
        OnFailure::Drop => None,
        OnFailure::FlagAndKeepOriginal => Some(VariantRecord {
            original_id: record.id.clone(),
            style,
            sentence: record.sentence.clone(),
            tokens: record.tokens.clone(),
            model_id: request.model_id,
            attempts: budget,
            flagged: true,
        }),
    })
}

/// Rephrases every record of an original split, with at most
/// `policy.workers` concurrent provider calls. Output order follows the input.
pub fn generate_split(
    original: &DatasetSplit,
    style: VariantStyle,
    provider: &dyn ChatProvider,
    policy: &GenerationPolicy,
    template: &PromptTemplate,
) -> Result<DatasetSplit, VariantGenError> {
    if original.style != VariantStyle::Original {
        return Err(VariantGenError::NotOriginal(original.style));
    }
    if !style.is_variant() {
        return Err(VariantGenError::OriginalStyle);
    }
    let results = bounded_map(policy.workers, &original.records, |r| generate_variant(r, style, provider, policy, template));

    let mut records = Vec::with_capacity(original.len());
    let mut dropped = Vec::new();
    for (orig, result) in original.records.iter().zip(results) {
        match result? {
            Some(v) => records.push(v.into_record(orig)),
            None => dropped.push(orig.id.clone()),
        }
    }
    if !dropped.is_empty() {
        return Err(VariantGenError::Dropped { style, ids: dropped });
    }
    Ok(DatasetSplit { style, source_dataset: original.source_dataset.clone(), records })
}

/// Number of flagged rows in a generated split.
pub fn flagged_count(split: &DatasetSplit) -> usize {
    split
        .records
        .iter()
        .filter(|r| r.provenance.as_ref().and_then(|p| p.flagged).unwrap_or(false))
        .count()
}
