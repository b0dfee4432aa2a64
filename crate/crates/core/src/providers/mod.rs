//! Chat-completion and sentence-embedding providers.
//!
//! The HTTP client speaks the common chat-completions and embeddings JSON
//! shapes, retries with exponential backoff, paces requests, and caches raw
//! responses on disk. [`mock`] holds deterministic offline providers used by
//! tests and by `--mock-provider` runs.

mod cache;
mod clock;
mod http;
pub mod mock;
mod rate;

use std::time::Duration;

use serde::{Deserialize, Serialize};

pub use cache::DiskCache;
pub use clock::{Clock, ManualClock, SystemClock};
pub use http::{
    HttpChatProvider, HttpClient, HttpEmbeddingProvider, HttpResponse, HttpTransport, UreqTransport,
};
pub use mock::{mock_chat_provider, MockChatProvider, MockEmbeddingProvider, MockKind};
pub use rate::RateLimiter;

/// Environment variable holding the provider credential.
pub const DEFAULT_API_KEY_ENV: &str = "LANGROBUST_API_KEY";

#[derive(Debug, thiserror::Error)]
pub enum ProviderError {
    #[error("transport failure after {attempts} attempt(s): {message}")]
    Transport { attempts: u32, message: String },
    #[error("provider returned status {status} after {attempts} attempt(s): {body}")]
    Status { status: u16, attempts: u32, body: String },
    #[error("malformed provider response: {0}")]
    Malformed(String),
    #[error("embedding dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("provider configuration: {0}")]
    Config(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
}

impl ChatMessage {
    pub fn system(content: impl Into<String>) -> Self {
        Self { role: Role::System, content: content.into() }
    }

    pub fn user(content: impl Into<String>) -> Self {
        Self { role: Role::User, content: content.into() }
    }
}

/// Body of a chat-completions call. Field order is fixed, so the serialized
/// form is a stable cache key.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionRequest {
    #[serde(rename = "model")]
    pub model_id: String,
    pub messages: Vec<ChatMessage>,
    pub temperature: f64,
    pub max_tokens: u32,
}

impl CompletionRequest {
    pub fn validate(&self) -> Result<(), ProviderError> {
        if self.messages.is_empty() {
            return Err(ProviderError::InvalidRequest("no messages".into()));
        }
        if self.messages.iter().any(|m| m.role == Role::User && m.content.trim().is_empty()) {
            return Err(ProviderError::InvalidRequest("empty user message".into()));
        }
        if self.temperature.is_nan() || self.temperature < 0.0 {
            return Err(ProviderError::InvalidRequest(format!("temperature {}", self.temperature)));
        }
        if self.max_tokens == 0 {
            return Err(ProviderError::InvalidRequest("max_tokens must be positive".into()));
        }
        Ok(())
    }

    /// Text of the last user message.
    pub fn last_user_content(&self) -> Option<&str> {
        self.messages.iter().rev().find(|m| m.role == Role::User).map(|m| m.content.as_str())
    }
}

/// Retry and pacing settings. The delay before retry `k` (1-based) is
/// `base_delay * backoff_factor^(k-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    #[serde(with = "millis")]
    pub base_delay: Duration,
    pub backoff_factor: f64,
    pub requests_per_minute: u32,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self { max_attempts: 5, base_delay: Duration::from_millis(500), backoff_factor: 2.0, requests_per_minute: 60 }
    }
}

impl RetryPolicy {
    pub fn validate(&self) -> Result<(), ProviderError> {
        if self.max_attempts == 0 {
            return Err(ProviderError::Config("max_attempts must be at least 1".into()));
        }
        if self.backoff_factor.is_nan() || self.backoff_factor < 1.0 {
            return Err(ProviderError::Config("backoff_factor must be >= 1".into()));
        }
        if self.requests_per_minute == 0 {
            return Err(ProviderError::Config("requests_per_minute must be positive".into()));
        }
        Ok(())
    }

    pub fn delay_before_retry(&self, retry: u32) -> Duration {
        self.base_delay.mul_f64(self.backoff_factor.powi(retry.saturating_sub(1) as i32))
    }
}

mod millis {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(d.as_millis() as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_millis(u64::deserialize(d)?))
    }
}

/// Provider section of the toolkit config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProviderConfig {
    pub base_url: String,
    pub chat_model_id: String,
    pub embedding_model_id: String,
    pub requests_per_minute: u32,
    pub api_key_env: String,
    pub max_attempts: u32,
    pub base_delay_ms: u64,
    pub backoff_factor: f64,
}

impl Default for ProviderConfig {
    fn default() -> Self {
        Self {
            base_url: "https://api.openai.com/v1".into(),
            chat_model_id: "gpt-3.5-turbo".into(),
            embedding_model_id: "text-embedding-3-small".into(),
            requests_per_minute: 60,
            api_key_env: DEFAULT_API_KEY_ENV.into(),
            max_attempts: 5,
            base_delay_ms: 500,
            backoff_factor: 2.0,
        }
    }
}

impl ProviderConfig {
    pub fn retry_policy(&self) -> RetryPolicy {
        RetryPolicy {
            max_attempts: self.max_attempts,
            base_delay: Duration::from_millis(self.base_delay_ms),
            backoff_factor: self.backoff_factor,
            requests_per_minute: self.requests_per_minute,
        }
    }

    /// Reads the credential from the configured environment variable.
    pub fn api_key(&self) -> Option<String> {
        std::env::var(&self.api_key_env).ok().filter(|k| !k.is_empty())
    }
}

/// A chat-completion backend.
pub trait ChatProvider: Send + Sync {
    fn model_id(&self) -> &str;
    /// Returns the first choice's message content.
    fn complete(&self, request: &CompletionRequest) -> Result<String, ProviderError>;
}

/// A sentence-embedding backend.
pub trait EmbeddingProvider: Send + Sync {
    fn model_id(&self) -> &str;
    /// One vector per input, in input order, all of one dimension.
    fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, ProviderError>;
}
