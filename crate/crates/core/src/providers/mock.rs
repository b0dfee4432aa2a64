//! Deterministic offline providers.
//!
//! [`MockChatProvider`] applies a fixed rewrite rule per style and answers in
//! the `{"new_sentence": "..."}` format the generation prompts ask for. The
//! rules operate on whitespace-separated words; a trailing run of `.`, `!` or
//! `?` is set aside and re-attached unless noted.
//!
//! | kind           | rule |
//! |----------------|------|
//! | syntax         | `A, B` → `B, A` splitting at the last `", "`; without a comma, the first preposition (after word 0) starts a phrase that is moved to the front |
//! | inverse-syntax | `A, B` → `B, A` splitting at the first `", "` (undoes `syntax` for comma sentences) |
//! | voice          | `X <verb> Y` → `Y is <participle> by X` for a fixed verb table |
//! | modifier       | inserts `small` before the first word the bundled tagger marks as a noun (or at the front) |
//! | accent         | prepends `hey mate, ` to the whole sentence |
//! | tone           | `could you find <sentence>?` |
//! | identity       | returns the sentence unchanged |
//!
//! Sentences the rule does not apply to come back unchanged. The seed is part
//! of the model id (and so of cache keys) but does not alter the rules.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, LazyLock, Mutex};

use sha2::{Digest, Sha256};

use super::clock::Clock;
use super::http::{HttpResponse, HttpTransport};
use super::{ChatProvider, CompletionRequest, EmbeddingProvider, ProviderError};
use crate::corpus::VariantStyle;
use crate::diversity::{word_tokens, LexiconTagger, PosTag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MockKind {
    Syntax,
    InverseSyntax,
    Voice,
    Modifier,
    Accent,
    Tone,
    Identity,
}

impl MockKind {
    pub fn name(self) -> &'static str {
        match self {
            MockKind::Syntax => "syntax",
            MockKind::InverseSyntax => "inverse-syntax",
            MockKind::Voice => "voice",
            MockKind::Modifier => "modifier",
            MockKind::Accent => "accent",
            MockKind::Tone => "tone",
            MockKind::Identity => "identity",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s.trim().to_ascii_lowercase().as_str() {
            "syntax" => MockKind::Syntax,
            "inverse-syntax" | "inverse_syntax" => MockKind::InverseSyntax,
            "voice" => MockKind::Voice,
            "modifier" => MockKind::Modifier,
            "accent" => MockKind::Accent,
            "tone" => MockKind::Tone,
            "identity" => MockKind::Identity,
            _ => return None,
        })
    }

    pub fn for_style(style: VariantStyle) -> Self {
        match style {
            VariantStyle::Original => MockKind::Identity,
            VariantStyle::Syntax => MockKind::Syntax,
            VariantStyle::Voice => MockKind::Voice,
            VariantStyle::Modifier => MockKind::Modifier,
            VariantStyle::Accent => MockKind::Accent,
            VariantStyle::Tone => MockKind::Tone,
        }
    }
}

pub const MOCK_ADJECTIVE: &str = "small";
pub const MOCK_ACCENT_PREFIX: &str = "hey mate, ";
pub const MOCK_TONE_PREFIX: &str = "could you find ";

const PREPOSITIONS: &[&str] = &[
    "on", "in", "near", "under", "above", "behind", "beside", "by", "with", "at", "next", "between", "against",
    "below", "inside", "across", "facing",
];

const VOICE_VERBS: &[(&str, &str)] = &[
    ("faces", "faced"),
    ("touches", "touched"),
    ("supports", "supported"),
    ("holds", "held"),
    ("covers", "covered"),
    ("blocks", "blocked"),
    ("surrounds", "surrounded"),
    ("contains", "contained"),
    ("hides", "hidden"),
    ("overlooks", "overlooked"),
    ("leans", "leaned on"),
];

static TAGGER: LazyLock<LexiconTagger> = LazyLock::new(LexiconTagger::bundled);

fn split_terminal(s: &str) -> (&str, &str) {
    let body = s.trim_end_matches(['.', '!', '?']);
    (body.trim_end(), &s[body.len()..])
}

fn bare(word: &str) -> String {
    word.trim_matches(|c: char| !c.is_alphanumeric()).to_lowercase()
}

fn swap_at_last_comma(body: &str) -> Option<String> {
    body.rsplit_once(", ").map(|(head, tail)| format!("{tail}, {head}"))
}

fn swap_at_first_comma(body: &str) -> Option<String> {
    body.split_once(", ").map(|(head, tail)| format!("{tail}, {head}"))
}

fn decapitalize(s: &str) -> String {
    let first_word = s.split_whitespace().next().unwrap_or("");
    let keep = first_word == "I" || (first_word.chars().count() > 1 && first_word.chars().all(|c| !c.is_lowercase()));
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if !keep => c.to_lowercase().chain(chars).collect(),
        _ => s.to_string(),
    }
}

fn syntax_rule(body: &str) -> Option<String> {
    if let Some(s) = swap_at_last_comma(body) {
        return Some(s);
    }
    let words: Vec<&str> = body.split_whitespace().collect();
    let i = (1..words.len()).find(|&i| PREPOSITIONS.contains(&bare(words[i]).as_str()))?;
    Some(format!("{}, {}", words[i..].join(" "), words[..i].join(" ")))
}

fn voice_rule(body: &str) -> Option<String> {
    let words: Vec<&str> = body.split_whitespace().collect();
    let (i, participle) = (1..words.len().saturating_sub(1))
        .find_map(|i| VOICE_VERBS.iter().find(|(v, _)| *v == bare(words[i])).map(|(_, p)| (i, *p)))?;
    let subject = words[..i].join(" ");
    let object = words[i + 1..].join(" ");
    Some(format!("{} is {participle} by {}", object, decapitalize(&subject)))
}

fn modifier_rule(body: &str) -> String {
    let words: Vec<&str> = body.split_whitespace().collect();
    let noun = words.iter().position(|w| TAGGER.tag_word(&bare(w)) == PosTag::Noun).unwrap_or(0);
    let mut out: Vec<&str> = Vec::with_capacity(words.len() + 1);
    out.extend(&words[..noun]);
    out.push(MOCK_ADJECTIVE);
    out.extend(&words[noun..]);
    out.join(" ")
}

/// Applies the documented rule of `kind` to a sentence.
pub fn apply_mock_rule(kind: MockKind, sentence: &str) -> String {
    let s = sentence.trim();
    let (body, terminal) = split_terminal(s);
    match kind {
        MockKind::Identity => s.to_string(),
        MockKind::Accent => format!("{MOCK_ACCENT_PREFIX}{}", decapitalize(s)),
        MockKind::Tone => format!("{MOCK_TONE_PREFIX}{}?", decapitalize(body)),
        MockKind::Syntax => syntax_rule(body).map(|b| format!("{b}{terminal}")).unwrap_or_else(|| s.to_string()),
        MockKind::InverseSyntax => {
            swap_at_first_comma(body).map(|b| format!("{b}{terminal}")).unwrap_or_else(|| s.to_string())
        }
        MockKind::Voice => voice_rule(body).map(|b| format!("{b}{terminal}")).unwrap_or_else(|| s.to_string()),
        MockKind::Modifier => format!("{}{terminal}", modifier_rule(body)),
    }
}

/// Pulls the sentence out of a user message, unwrapping the
/// `The sentence: <...>` slot when present.
pub fn extract_sentence(content: &str) -> &str {
    let t = content.trim();
    t.strip_prefix(crate::variantgen::SENTENCE_SLOT_PREFIX)
        .and_then(|rest| rest.strip_suffix(crate::variantgen::SENTENCE_SLOT_SUFFIX))
        .unwrap_or(t)
}

/// `{"new_sentence": <json string>}` with a space after the colon.
pub fn wrap_new_sentence(sentence: &str) -> String {
    format!("{{\"new_sentence\": {}}}", serde_json::Value::String(sentence.to_string()))
}

#[derive(Debug, Clone)]
pub struct MockChatProvider {
    kind: MockKind,
    seed: u64,
    model_id: String,
    calls: Arc<AtomicUsize>,
}

impl MockChatProvider {
    pub fn new(kind: MockKind, seed: u64) -> Self {
        Self { kind, seed, model_id: format!("mock-{}-{seed}", kind.name()), calls: Arc::new(AtomicUsize::new(0)) }
    }

    pub fn kind(&self) -> MockKind {
        self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }
}

/// The mock that rewrites into `style`.
pub fn mock_chat_provider(style: VariantStyle, seed: u64) -> MockChatProvider {
    MockChatProvider::new(MockKind::for_style(style), seed)
}

impl ChatProvider for MockChatProvider {
    fn model_id(&self) -> &str {
        &self.model_id
    }

    fn complete(&self, request: &CompletionRequest) -> Result<String, ProviderError> {
        request.validate()?;
        self.calls.fetch_add(1, Ordering::SeqCst);
        let content = request.last_user_content().unwrap_or_default();
        Ok(wrap_new_sentence(&apply_mock_rule(self.kind, extract_sentence(content))))
    }
}

/// Replays fixed responses in order, repeating the last one when exhausted.
pub struct ScriptedChatProvider {
    model_id: String,
    script: Mutex<VecDeque<Result<String, String>>>,
    last: Mutex<Option<Result<String, String>>>,
    requests: Mutex<Vec<CompletionRequest>>,
}

impl ScriptedChatProvider {
    pub fn new(responses: Vec<Result<String, String>>) -> Self {
        Self {
            model_id: "scripted".into(),
            script: Mutex::new(responses.into()),
            last: Mutex::new(None),
            requests: Mutex::new(Vec::new()),
        }
    }

    pub fn replies<S: Into<String>>(replies: impl IntoIterator<Item = S>) -> Self {
        Self::new(replies.into_iter().map(|s| Ok(s.into())).collect())
    }

    pub fn calls(&self) -> usize {
        self.requests.lock().unwrap().len()
    }

    pub fn requests(&self) -> Vec<CompletionRequest> {
        self.requests.lock().unwrap().clone()
    }
}

impl ChatProvider for ScriptedChatProvider {
    fn model_id(&self) -> &str {
        &self.model_id
    }

    fn complete(&self, request: &CompletionRequest) -> Result<String, ProviderError> {
        self.requests.lock().unwrap().push(request.clone());
        let next = self.script.lock().unwrap().pop_front();
        let reply = match next {
            Some(r) => {
                *self.last.lock().unwrap() = Some(r.clone());
                r
            }
            None => self.last.lock().unwrap().clone().unwrap_or_else(|| Err("empty script".into())),
        };
        reply.map_err(|message| ProviderError::Transport { attempts: 1, message })
    }
}

/// Scripted HTTP endpoint: returns queued responses (the last one repeats)
/// and records each call with the clock time it arrived.
pub struct ScriptedTransport {
    script: Mutex<VecDeque<Result<HttpResponse, String>>>,
    last: Mutex<Option<Result<HttpResponse, String>>>,
    clock: Arc<dyn Clock>,
    calls: Mutex<Vec<(std::time::Duration, String, String)>>,
}

impl ScriptedTransport {
    pub fn new(script: Vec<Result<HttpResponse, String>>, clock: Arc<dyn Clock>) -> Self {
        Self { script: Mutex::new(script.into()), last: Mutex::new(None), clock, calls: Mutex::new(Vec::new()) }
    }

    pub fn status(status: u16, body: impl Into<String>) -> Result<HttpResponse, String> {
        Ok(HttpResponse { status, body: body.into() })
    }

    /// `(arrival time, url, body)` per call.
    pub fn calls(&self) -> Vec<(std::time::Duration, String, String)> {
        self.calls.lock().unwrap().clone()
    }
}

impl HttpTransport for ScriptedTransport {
    fn post_json(&self, url: &str, _bearer: Option<&str>, body: &str) -> Result<HttpResponse, String> {
        self.calls.lock().unwrap().push((self.clock.now(), url.to_string(), body.to_string()));
        let next = self.script.lock().unwrap().pop_front();
        match next {
            Some(r) => {
                *self.last.lock().unwrap() = Some(r.clone());
                r
            }
            None => self.last.lock().unwrap().clone().unwrap_or_else(|| Err("empty script".into())),
        }
    }
}

/// Hashed bag-of-words embedder: each word adds ±1 to one of `dim` buckets
/// chosen by SHA-256 of the word. Texts without words map to the first basis
/// vector.
#[derive(Debug, Clone)]
pub struct MockEmbeddingProvider {
    dim: usize,
    model_id: String,
}

impl MockEmbeddingProvider {
    pub fn new(dim: usize) -> Self {
        Self { dim: dim.max(1), model_id: format!("mock-embed-{dim}") }
    }

    pub fn embed_one(&self, text: &str) -> Vec<f64> {
        let mut v = vec![0.0; self.dim];
        for w in word_tokens(text) {
            let h = Sha256::digest(w.as_bytes());
            let bucket = u64::from_le_bytes(h[..8].try_into().unwrap()) as usize % self.dim;
            let sign = if h[8] & 1 == 0 { 1.0 } else { -1.0 };
            v[bucket] += sign;
        }
        if v.iter().all(|x| *x == 0.0) {
            v[0] = 1.0;
        }
        v
    }
}

impl Default for MockEmbeddingProvider {
    fn default() -> Self {
        Self::new(64)
    }
}

impl EmbeddingProvider for MockEmbeddingProvider {
    fn model_id(&self) -> &str {
        &self.model_id
    }

    fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, ProviderError> {
        Ok(texts.iter().map(|t| self.embed_one(t)).collect())
    }
}
