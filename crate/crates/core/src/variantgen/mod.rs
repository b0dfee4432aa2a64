//! Rephrasing-variant generation: render the structured prompt, call a chat
//! provider, parse the strict-JSON reply, and assemble aligned variant splits.

mod generate;
mod parse;
mod template;

pub use generate::{flagged_count, generate_split, generate_variant, GenerationPolicy, OnFailure, VariantRecord};
pub use parse::{first_json_object, parse_response};
pub use template::{render_prompt, render_system, Exemplar, PromptTemplate, StylePrompt};

use crate::corpus::VariantStyle;
use crate::providers::ProviderError;

/// Opening of the user message slot that carries the sentence.
pub const SENTENCE_SLOT_PREFIX: &str = "The sentence: <";
pub const SENTENCE_SLOT_SUFFIX: &str = ">";

#[derive(Debug, thiserror::Error)]
pub enum VariantGenError {
    #[error("no JSON object in reply")]
    NoJsonObject,
    #[error("reply object has no string \"new_sentence\"")]
    MissingKey,
    #[error("\"new_sentence\" is empty")]
    EmptySentence,
    #[error("the original style cannot be generated")]
    OriginalStyle,
    #[error("expected an original split, got {0}")]
    NotOriginal(VariantStyle),
    #[error("{style}: {} record(s) dropped after failed generation: {ids:?}", ids.len())]
    Dropped { style: VariantStyle, ids: Vec<String> },
    #[error("prompt asset: {0}")]
    Asset(String),
    #[error(transparent)]
    Provider(#[from] ProviderError),
}
