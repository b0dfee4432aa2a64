//! Pre-alignment: rewrite variant-style sentences back into the style a
//! trained model expects, using generic rules plus a few in-context pairs.
//! Any failure falls back to the input sentence, so no query is ever lost.

use std::path::Path;

use rand::seq::IndexedRandom;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::corpus::{seeded_rng, DatasetSplit, Provenance};
use crate::exec::bounded_map;
use crate::providers::{ChatMessage, ChatProvider, CompletionRequest, DiskCache};
use crate::variantgen::{parse_response, Exemplar};

const BUNDLED_CONFIG: &str = include_str!("../../assets/prealign.json");

/// Sentence every valid rule block must contain.
pub const MEANING_RULE: &str = "You should not change the meaning of the input sentence";

pub const PREALIGN_FORMAT_INSTRUCTION: &str = "Return the rewritten sentence as a JSON dictionary with the single key \"new_sentence\".\nYou should ONLY return the JSON dictionary.";

pub const MIN_EXEMPLARS: usize = 3;
pub const MAX_EXEMPLARS: usize = 6;

#[derive(Debug, thiserror::Error)]
pub enum PrealignError {
    #[error("pre-alignment config: {0}")]
    Config(String),
}

fn default_max_retries() -> u32 {
    2
}

fn default_max_tokens() -> u32 {
    256
}

fn default_workers() -> usize {
    4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrealignConfig {
    /// Names the target model's style; also the cache namespace.
    pub model_style_id: String,
    pub generic_rules: String,
    pub exemplars: Vec<Exemplar>,
    #[serde(default)]
    pub temperature: f64,
    /// Extra provider calls allowed after an unparseable reply.
    #[serde(default = "default_max_retries")]
    pub max_retries: u32,
    #[serde(default = "default_max_tokens")]
    pub max_tokens: u32,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default)]
    pub reconstructed: bool,
}

impl PrealignConfig {
    /// Default rules and ScanRefer-style exemplars. The rule text is a
    /// reconstruction, flagged by `reconstructed`.
    pub fn bundled() -> Self {
        Self::from_json(BUNDLED_CONFIG).expect("bundled pre-alignment config is valid")
    }

    pub fn from_json(json: &str) -> Result<Self, PrealignError> {
        let c: PrealignConfig = serde_json::from_str(json).map_err(|e| PrealignError::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, PrealignError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| PrealignError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), PrealignError> {
        let bad = |m: String| Err(PrealignError::Config(m));
        if self.model_style_id.trim().is_empty() {
            return bad("model_style_id is empty".into());
        }
        if !(MIN_EXEMPLARS..=MAX_EXEMPLARS).contains(&self.exemplars.len()) {
            return bad(format!("{MIN_EXEMPLARS} to {MAX_EXEMPLARS} exemplars required, got {}", self.exemplars.len()));
        }
        if let Some(i) = self.exemplars.iter().position(|e| e.source.trim().is_empty() || e.target.trim().is_empty()) {
            return bad(format!("exemplar {} has an empty side", i + 1));
        }
        if !self.generic_rules.contains(MEANING_RULE) {
            return bad(format!("generic_rules must contain \"{MEANING_RULE}\""));
        }
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return bad(format!("temperature must be non-negative, got {}", self.temperature));
        }
        Ok(())
    }
}

pub fn render_prealign_system(config: &PrealignConfig) -> String {
    let mut s = format!("[Generic Rules]\n{}\n\n[Format Instruction]\n{PREALIGN_FORMAT_INSTRUCTION}\n\n[In-Context Examples]\n", config.generic_rules.trim_end());
    for (i, e) in config.exemplars.iter().enumerate() {
        s.push_str(&format!(
            "#example {}\nsentence: {}\nreturn answer: {}\n",
            i + 1,
            e.source,
            crate::providers::mock::wrap_new_sentence(&e.target)
        ));
    }
    s
}

/// System message with rules, format instruction and exemplars; the user
/// message is the sentence itself.
pub fn render_prealign_prompt(config: &PrealignConfig, sentence: &str) -> Vec<ChatMessage> {
    vec![ChatMessage::system(render_prealign_system(config)), ChatMessage::user(sentence)]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Normalized {
    pub sentence: String,
    /// The input was returned unchanged because normalization failed.
    pub fallback: bool,
    pub cached: bool,
}

fn cache_key(config: &PrealignConfig, provider: &dyn ChatProvider, messages: &[ChatMessage]) -> String {
    let payload = json!({ "model": provider.model_id(), "temperature": config.temperature, "messages": messages });
    DiskCache::key(&format!("prealign/{}", config.model_style_id), &payload.to_string())
}

/// Rewrites one sentence into the configured style.
///
/// Replies go through the same JSON contract as variant generation. When
/// every attempt fails, or the provider errors, the input comes back
/// unchanged with `fallback` set. Only successful rewrites are cached.
pub fn normalize(sentence: &str, config: &PrealignConfig, provider: &dyn ChatProvider, cache: Option<&DiskCache>) -> Normalized {
    let fallback = || Normalized { sentence: sentence.to_string(), fallback: true, cached: false };
    if sentence.trim().is_empty() {
        return fallback();
    }
    let messages = render_prealign_prompt(config, sentence);
    let key = cache.map(|_| cache_key(config, provider, &messages));
    if let (Some(c), Some(k)) = (cache, &key) {
        if let Some(hit) = c.get(k).filter(|s| !s.trim().is_empty()) {
            return Normalized { sentence: hit, fallback: false, cached: true };
        }
    }
    let request = CompletionRequest {
        model_id: provider.model_id().to_string(),
        messages,
        temperature: config.temperature,
        max_tokens: config.max_tokens,
    };
    for attempt in 1..=config.max_retries + 1 {
        let reply = match provider.complete(&request) {
            Ok(r) => r,
            Err(e) => {
                log::warn!("pre-alignment provider error, keeping input: {e}");
                return fallback();
            }
        };
        match parse_response(&reply) {
            Ok(out) => {
                if let (Some(c), Some(k)) = (cache, &key) {
                    if let Err(e) = c.put(k, &out) {
                        log::warn!("pre-alignment cache write failed: {e}");
                    }
                }
                return Normalized { sentence: out, fallback: false, cached: false };
            }
            Err(e) => log::debug!("unparseable pre-alignment reply on attempt {attempt}: {e}"),
        }
    }
    log::warn!("no parseable pre-alignment reply; keeping input");
    fallback()
}

/// Normalizes every record, keeping ids, order and style. Each record's
/// provenance carries the fallback flag.
pub fn normalize_split(split: &DatasetSplit, config: &PrealignConfig, provider: &dyn ChatProvider, cache: Option<&DiskCache>) -> DatasetSplit {
    let results = bounded_map(config.workers, &split.records, |r| normalize(&r.sentence, config, provider, cache));
    let records = split
        .records
        .iter()
        .zip(results)
        .map(|(r, n)| {
            let mut out = r.clone();
            if n.sentence != r.sentence {
                out.set_sentence(n.sentence);
            }
            let mut prov = out.provenance.take().unwrap_or_else(Provenance::default);
            prov.fallback = Some(n.fallback);
            out.provenance = Some(prov);
            out
        })
        .collect();
    DatasetSplit { style: split.style, source_dataset: split.source_dataset.clone(), records }
}

/// Number of records in a normalized split that fell back to their input.
pub fn fallback_count(split: &DatasetSplit) -> usize {
    split.records.iter().filter(|r| r.provenance.as_ref().and_then(|p| p.fallback).unwrap_or(false)).count()
}

/// Draws `k` training sentences as exemplar targets. Sources are left empty
/// for a person to write in the styles the model should handle.
pub fn exemplar_skeleton(training: &DatasetSplit, k: usize, seed: u64) -> Vec<Exemplar> {
    let mut rng = seeded_rng(seed);
    training
        .records
        .choose_multiple(&mut rng, k)
        .map(|r| Exemplar { source: String::new(), target: r.sentence.clone() })
        .collect()
}
