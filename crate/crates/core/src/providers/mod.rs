//! Result acquisition: search providers and page sources.
//!
//! A provider turns a query into an engine's top-N [`ResultEntry`] list; a
//! page source turns a result URL into purified [`PageContent`](crate::content::PageContent). Live engines,
//! recorded SERP fixtures and offline corpora each implement both sides.

mod fetch;
mod offline;
mod serp;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use fetch::{fetch_page, FixturePages, HttpFetcher, PageFixture, PageSource};
pub use offline::{offline_search, CorpusDoc, CorpusManifest, OfflineCorpus};
pub use serp::{parse_serp, ExtractionRules, SerpHit};

/// Environment variable overriding the HTTP user agent.
pub const USER_AGENT_ENV: &str = "SEMRANK_USER_AGENT";
/// Environment variable naming an HTTP proxy for live fetches.
pub const HTTP_PROXY_ENV: &str = "SEMRANK_HTTP_PROXY";

#[derive(Debug, thiserror::Error)]
pub enum ProviderError {
    #[error("{engine} unavailable: {cause}")]
    ProviderUnavailable { engine: Engine, cause: String },
    #[error("no results could be extracted from the {engine} results page")]
    ParseFailure { engine: Engine },
    #[error("corpus manifest {path}: {reason}")]
    ManifestError { path: PathBuf, reason: String },
    #[error("extraction rules for {engine}: {reason}")]
    InvalidRules { engine: Engine, reason: String },
    #[error("query is empty")]
    EmptyQuery,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Google,
    Yahoo,
    Bing,
    Offline,
}

impl Engine {
    pub const WEB: [Engine; 3] = [Engine::Google, Engine::Yahoo, Engine::Bing];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Google => "google",
            Engine::Yahoo => "yahoo",
            Engine::Bing => "bing",
            Engine::Offline => "offline",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "google" => Ok(Engine::Google),
            "yahoo" => Ok(Engine::Yahoo),
            "bing" => Ok(Engine::Bing),
            "offline" => Ok(Engine::Offline),
            other => Err(format!("unknown engine `{other}`")),
        }
    }
}

/// One search-engine hit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultEntry {
    pub engine: Engine,
    /// 1 is the engine's top hit.
    pub classical_rank: u32,
    pub title: String,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
    pub url: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProviderConfig {
    pub top_n: usize,
    pub timeout_ms: u64,
    pub user_agent: String,
    pub max_parallel_fetches: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proxy: Option<String>,
}

impl Default for ProviderConfig {
    fn default() -> Self {
        ProviderConfig {
            top_n: 20,
            timeout_ms: 10_000,
            user_agent: concat!("semrank/", env!("CARGO_PKG_VERSION")).to_string(),
            max_parallel_fetches: 8,
            proxy: None,
        }
    }
}

impl ProviderConfig {
    /// Applies `SEMRANK_USER_AGENT` and `SEMRANK_HTTP_PROXY` when set.
    pub fn with_env(mut self) -> Self {
        if let Ok(ua) = std::env::var(USER_AGENT_ENV) {
            if !ua.is_empty() {
                self.user_agent = ua;
            }
        }
        if let Ok(proxy) = std::env::var(HTTP_PROXY_ENV) {
            if !proxy.is_empty() {
                self.proxy = Some(proxy);
            }
        }
        self
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.top_n == 0 {
            return Err("top_n must be at least 1".into());
        }
        if self.timeout_ms == 0 {
            return Err("timeout_ms must be positive".into());
        }
        if self.max_parallel_fetches == 0 {
            return Err("max_parallel_fetches must be positive".into());
        }
        Ok(())
    }
}

/// Deduplicates identical URLs (first wins), truncates to `top_n` and numbers
/// ranks from 1.
pub fn rank_hits(engine: Engine, hits: Vec<SerpHit>, top_n: usize) -> Vec<ResultEntry> {
    let mut seen = std::collections::HashSet::new();
    hits.into_iter()
        .filter(|h| seen.insert(h.url.clone()))
        .take(top_n)
        .enumerate()
        .map(|(i, h)| ResultEntry {
            engine,
            classical_rank: i as u32 + 1,
            title: h.title,
            abstract_text: h.abstract_text,
            url: h.url,
        })
        .collect()
}

/// Scrapes a live engine. Best effort: SERP markup changes often.
#[derive(Debug, Clone)]
pub struct LiveProvider {
    engine: Engine,
    rules: ExtractionRules,
    client: reqwest::Client,
}

impl LiveProvider {
    pub fn new(engine: Engine, rules: ExtractionRules, config: &ProviderConfig) -> Result<Self, ProviderError> {
        let client = fetch::build_client(config).map_err(|e| ProviderError::ProviderUnavailable {
            engine,
            cause: e.to_string(),
        })?;
        Ok(LiveProvider { engine, rules, client })
    }

    pub async fn search(&self, query: &str, config: &ProviderConfig) -> Result<Vec<ResultEntry>, ProviderError> {
        let url = self.rules.search_url(query, config.top_n).ok_or_else(|| ProviderError::InvalidRules {
            engine: self.engine,
            reason: "no search_url template".into(),
        })?;
        let unavailable = |cause: String| ProviderError::ProviderUnavailable {
            engine: self.engine,
            cause,
        };
        let request = self.client.get(&url).send();
        let response = tokio::time::timeout(std::time::Duration::from_millis(config.timeout_ms), request)
            .await
            .map_err(|_| unavailable("timed out".into()))?
            .map_err(|e| unavailable(e.to_string()))?;
        if !response.status().is_success() {
            return Err(unavailable(format!("HTTP {}", response.status().as_u16())));
        }
        let body = response.bytes().await.map_err(|e| unavailable(e.to_string()))?;
        let hits = self.rules.parse_serp(self.engine, &body)?;
        Ok(rank_hits(self.engine, hits, config.top_n))
    }
}

/// Replays a recorded SERP page (`<dir>/<engine>.html`).
#[derive(Debug, Clone)]
pub struct FixtureProvider {
    engine: Engine,
    path: PathBuf,
    rules: ExtractionRules,
}

impl FixtureProvider {
    pub fn new(engine: Engine, dir: &Path, rules: ExtractionRules) -> Self {
        FixtureProvider {
            engine,
            path: dir.join(format!("{}.html", engine.name())),
            rules,
        }
    }

    pub fn search_sync(&self, query: &str, config: &ProviderConfig) -> Result<Vec<ResultEntry>, ProviderError> {
        if query.trim().is_empty() {
            return Err(ProviderError::EmptyQuery);
        }
        let html = std::fs::read(&self.path).map_err(|e| ProviderError::ProviderUnavailable {
            engine: self.engine,
            cause: format!("{}: {e}", self.path.display()),
        })?;
        let hits = self.rules.parse_serp(self.engine, &html)?;
        Ok(rank_hits(self.engine, hits, config.top_n))
    }
}

/// Any search provider.
#[derive(Debug, Clone)]
pub enum Provider {
    Live(LiveProvider),
    Fixture(FixtureProvider),
    Offline(OfflineCorpus),
}

impl Provider {
    pub fn engine(&self) -> Engine {
        match self {
            Provider::Live(p) => p.engine,
            Provider::Fixture(p) => p.engine,
            Provider::Offline(_) => Engine::Offline,
        }
    }

    /// Top-N results in the engine's own order, ranks `1..=k`.
    pub async fn search(&self, query: &str, config: &ProviderConfig) -> Result<Vec<ResultEntry>, ProviderError> {
        if query.trim().is_empty() {
            return Err(ProviderError::EmptyQuery);
        }
        match self {
            Provider::Live(p) => p.search(query, config).await,
            Provider::Fixture(p) => p.search_sync(query, config),
            Provider::Offline(c) => Ok(c.search(config)),
        }
    }
}
