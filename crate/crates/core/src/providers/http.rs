use std::collections::HashMap;
use std::sync::Arc;
use std::time::Duration;

use serde::Deserialize;
use serde_json::json;

use super::cache::DiskCache;
use super::clock::{Clock, SystemClock};
use super::rate::RateLimiter;
use super::{ChatProvider, CompletionRequest, EmbeddingProvider, ProviderConfig, ProviderError, RetryPolicy};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpResponse {
    pub status: u16,
    pub body: String,
}

/// Minimal JSON POST transport, swappable for scripted fakes in tests.
pub trait HttpTransport: Send + Sync {
    /// `Err` means no HTTP response was received (connect/timeout/IO).
    fn post_json(&self, url: &str, bearer: Option<&str>, body: &str) -> Result<HttpResponse, String>;
}

/// Blocking transport backed by `ureq`.
pub struct UreqTransport {
    agent: ureq::Agent,
}

impl UreqTransport {
    pub fn new(timeout: Duration) -> Self {
        let agent = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .timeout_global(Some(timeout))
            .build()
            .into();
        Self { agent }
    }
}

impl Default for UreqTransport {
    fn default() -> Self {
        Self::new(Duration::from_secs(120))
    }
}

impl HttpTransport for UreqTransport {
    fn post_json(&self, url: &str, bearer: Option<&str>, body: &str) -> Result<HttpResponse, String> {
        let mut req = self.agent.post(url).header("Content-Type", "application/json");
        if let Some(key) = bearer {
            req = req.header("Authorization", &format!("Bearer {key}"));
        }
        let mut resp = req.send(body).map_err(|e| e.to_string())?;
        let status = resp.status().as_u16();
        let body = resp.body_mut().read_to_string().map_err(|e| e.to_string())?;
        Ok(HttpResponse { status, body })
    }
}

fn is_retryable(status: u16) -> bool {
    status == 408 || status == 429 || (500..600).contains(&status)
}

/// Shared HTTP client: endpoint, credential, retry policy, pacing and clock.
pub struct HttpClient {
    base_url: String,
    api_key: Option<String>,
    policy: RetryPolicy,
    transport: Arc<dyn HttpTransport>,
    limiter: RateLimiter,
    clock: Arc<dyn Clock>,
}

impl HttpClient {
    pub fn new(
        base_url: impl Into<String>,
        api_key: Option<String>,
        policy: RetryPolicy,
        transport: Arc<dyn HttpTransport>,
        clock: Arc<dyn Clock>,
    ) -> Result<Self, ProviderError> {
        policy.validate()?;
        let base_url = base_url.into().trim_end_matches('/').to_string();
        if base_url.is_empty() {
            return Err(ProviderError::Config("base_url is empty".into()));
        }
        Ok(Self {
            base_url,
            api_key,
            limiter: RateLimiter::new(policy.requests_per_minute, clock.clone()),
            policy,
            transport,
            clock,
        })
    }

    /// Client for a real endpoint, reading the credential from the
    /// environment variable named in `config`.
    pub fn from_config(config: &ProviderConfig) -> Result<Self, ProviderError> {
        let key = config.api_key();
        if key.is_none() {
            log::warn!("{} is not set; requests are sent without a credential", config.api_key_env);
        }
        Self::new(
            config.base_url.clone(),
            key,
            config.retry_policy(),
            Arc::new(UreqTransport::default()),
            Arc::new(SystemClock::default()),
        )
    }

    pub fn policy(&self) -> &RetryPolicy {
        &self.policy
    }

    /// POSTs with pacing and retries; returns the body of the first
    /// successful response.
    fn post(&self, path: &str, body: &str) -> Result<String, ProviderError> {
        let url = format!("{}/{}", self.base_url, path);
        let mut attempt = 0;
        loop {
            attempt += 1;
            self.limiter.acquire();
            let outcome = self.transport.post_json(&url, self.api_key.as_deref(), body);
            let last_error = match outcome {
                Ok(resp) if (200..300).contains(&resp.status) => return Ok(resp.body),
                Ok(resp) if !is_retryable(resp.status) => {
                    return Err(ProviderError::Status { status: resp.status, attempts: attempt, body: resp.body })
                }
                Ok(resp) => ProviderError::Status { status: resp.status, attempts: attempt, body: resp.body },
                Err(message) => ProviderError::Transport { attempts: attempt, message },
            };
            if attempt >= self.policy.max_attempts {
                return Err(last_error);
            }
            log::debug!("attempt {attempt} failed ({last_error}); retrying");
            self.clock.sleep(self.policy.delay_before_retry(attempt));
        }
    }

    /// Chat completion with disk caching of the raw response body.
    pub fn chat_complete(&self, request: &CompletionRequest, cache: Option<&DiskCache>) -> Result<String, ProviderError> {
        request.validate()?;
        let payload = serde_json::to_string(request).map_err(|e| ProviderError::InvalidRequest(e.to_string()))?;
        let key = DiskCache::key(&format!("chat/{}", request.model_id), &payload);
        if let Some(raw) = cache.and_then(|c| c.get(&key)) {
            return parse_chat_body(&raw);
        }
        let raw = self.post("chat/completions", &payload)?;
        let content = parse_chat_body(&raw)?;
        if let Some(c) = cache {
            c.put(&key, &raw)?;
        }
        Ok(content)
    }

    /// Embeds `texts`, caching one vector per `(model_id, text)`. Duplicate
    /// texts are requested once.
    pub fn embed_sentences(&self, texts: &[String], model_id: &str, cache: Option<&DiskCache>) -> Result<Vec<Vec<f64>>, ProviderError> {
        if texts.is_empty() {
            return Ok(Vec::new());
        }
        let namespace = format!("embed/{model_id}");
        let mut known: HashMap<&str, Vec<f64>> = HashMap::new();
        let mut missing: Vec<&str> = Vec::new();
        for t in texts {
            if known.contains_key(t.as_str()) || missing.contains(&t.as_str()) {
                continue;
            }
            let cached = cache
                .and_then(|c| c.get(&DiskCache::key(&namespace, t)))
                .and_then(|raw| serde_json::from_str::<Vec<f64>>(&raw).ok());
            match cached {
                Some(v) => {
                    known.insert(t, v);
                }
                None => missing.push(t),
            }
        }
        if !missing.is_empty() {
            let body = json!({ "model": model_id, "input": missing }).to_string();
            let raw = self.post("embeddings", &body)?;
            let vectors = parse_embedding_body(&raw, missing.len())?;
            for (t, v) in missing.iter().zip(vectors) {
                if let Some(c) = cache {
                    c.put(&DiskCache::key(&namespace, t), &serde_json::to_string(&v).expect("vector serializes"))?;
                }
                known.insert(t, v);
            }
        }
        let out: Vec<Vec<f64>> = texts.iter().map(|t| known[t.as_str()].clone()).collect();
        let dim = out[0].len();
        if let Some(bad) = out.iter().find(|v| v.len() != dim) {
            return Err(ProviderError::DimensionMismatch { expected: dim, got: bad.len() });
        }
        Ok(out)
    }
}

#[derive(Deserialize)]
struct ChatBody {
    choices: Vec<ChatChoice>,
}

#[derive(Deserialize)]
struct ChatChoice {
    message: ChatContent,
}

#[derive(Deserialize)]
struct ChatContent {
    content: Option<String>,
}

fn parse_chat_body(raw: &str) -> Result<String, ProviderError> {
    let body: ChatBody = serde_json::from_str(raw).map_err(|e| ProviderError::Malformed(e.to_string()))?;
    body.choices
        .into_iter()
        .next()
        .and_then(|c| c.message.content)
        .ok_or_else(|| ProviderError::Malformed("no choices[0].message.content".into()))
}

#[derive(Deserialize)]
struct EmbeddingBody {
    data: Vec<EmbeddingItem>,
}

#[derive(Deserialize)]
struct EmbeddingItem {
    embedding: Vec<f64>,
    #[serde(default)]
    index: Option<usize>,
}

fn parse_embedding_body(raw: &str, expected: usize) -> Result<Vec<Vec<f64>>, ProviderError> {
    let body: EmbeddingBody = serde_json::from_str(raw).map_err(|e| ProviderError::Malformed(e.to_string()))?;
    if body.data.len() != expected {
        return Err(ProviderError::Malformed(format!("expected {expected} embeddings, got {}", body.data.len())));
    }
    let mut items = body.data;
    if items.iter().all(|i| i.index.is_some()) {
        items.sort_by_key(|i| i.index);
    }
    Ok(items.into_iter().map(|i| i.embedding).collect())
}

/// [`ChatProvider`] over an [`HttpClient`] with an optional cache.
pub struct HttpChatProvider {
    client: Arc<HttpClient>,
    model_id: String,
    cache: Option<Arc<DiskCache>>,
}

impl HttpChatProvider {
    pub fn new(client: Arc<HttpClient>, model_id: impl Into<String>, cache: Option<Arc<DiskCache>>) -> Self {
        Self { client, model_id: model_id.into(), cache }
    }
}

impl ChatProvider for HttpChatProvider {
    fn model_id(&self) -> &str {
        &self.model_id
    }

    fn complete(&self, request: &CompletionRequest) -> Result<String, ProviderError> {
        self.client.chat_complete(request, self.cache.as_deref())
    }
}

pub struct HttpEmbeddingProvider {
    client: Arc<HttpClient>,
    model_id: String,
    cache: Option<Arc<DiskCache>>,
}

impl HttpEmbeddingProvider {
    pub fn new(client: Arc<HttpClient>, model_id: impl Into<String>, cache: Option<Arc<DiskCache>>) -> Self {
        Self { client, model_id: model_id.into(), cache }
    }
}

impl EmbeddingProvider for HttpEmbeddingProvider {
    fn model_id(&self) -> &str {
        &self.model_id
    }

    fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, ProviderError> {
        self.client.embed_sentences(texts, &self.model_id, self.cache.as_deref())
    }
}
