//! Result page retrieval. Failures never surface as errors: a dead link is
//! data, recorded in the page's [`FetchStatus`].

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{OfflineCorpus, ProviderConfig, ProviderError};
use crate::content::{purify_html, purify_html_with_charset, FetchStatus, PageContent};

pub(super) fn build_client(config: &ProviderConfig) -> reqwest::Result<reqwest::Client> {
    let mut builder = reqwest::Client::builder()
        .user_agent(&config.user_agent)
        .timeout(Duration::from_millis(config.timeout_ms))
        .connect_timeout(Duration::from_millis(config.timeout_ms));
    // Only the configured proxy is used; ambient HTTP_PROXY variables are ignored.
    builder = match &config.proxy {
        Some(proxy) => builder.proxy(reqwest::Proxy::all(proxy)?),
        None => builder.no_proxy(),
    };
    builder.build()
}

#[derive(Debug, Clone)]
pub struct HttpFetcher {
    client: reqwest::Client,
}

impl HttpFetcher {
    pub fn new(config: &ProviderConfig) -> Result<Self, ProviderError> {
        let client = build_client(config).map_err(|e| ProviderError::ProviderUnavailable {
            engine: super::Engine::Offline,
            cause: format!("cannot build HTTP client: {e}"),
        })?;
        Ok(HttpFetcher { client })
    }

    pub async fn fetch(&self, url: &str, config: &ProviderConfig) -> PageContent {
        let budget = Duration::from_millis(config.timeout_ms);
        match tokio::time::timeout(budget, self.fetch_inner(url)).await {
            Ok(page) => page,
            Err(_) => PageContent::failed(url, FetchStatus::Timeout),
        }
    }

    async fn fetch_inner(&self, url: &str) -> PageContent {
        let response = match self.client.get(url).send().await {
            Ok(r) => r,
            Err(e) => return PageContent::failed(url, classify(&e)),
        };
        let status = response.status();
        if !status.is_success() {
            return PageContent::failed(url, FetchStatus::HttpError { code: status.as_u16() });
        }
        let charset = response
            .headers()
            .get(reqwest::header::CONTENT_TYPE)
            .and_then(|v| v.to_str().ok())
            .and_then(|ct| {
                ct.split(';')
                    .filter_map(|p| p.trim().strip_prefix("charset="))
                    .next()
                    .map(|c| c.trim_matches('"').to_string())
            });
        match response.bytes().await {
            Ok(body) => purify_html_with_charset(&body, url, charset.as_deref()),
            Err(e) => PageContent::failed(url, classify(&e)),
        }
    }
}

fn classify(e: &reqwest::Error) -> FetchStatus {
    if e.is_timeout() {
        FetchStatus::Timeout
    } else if let Some(status) = e.status() {
        FetchStatus::HttpError { code: status.as_u16() }
    } else {
        FetchStatus::Unreachable
    }
}

/// Fetches and purifies one page over HTTP, bounded by `config.timeout_ms`.
pub async fn fetch_page(url: &str, config: &ProviderConfig) -> PageContent {
    match HttpFetcher::new(config) {
        Ok(fetcher) => fetcher.fetch(url, config).await,
        Err(_) => PageContent::failed(url, FetchStatus::Unreachable),
    }
}

/// Recorded outcome for one URL in a fixture set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageFixture {
    pub url: String,
    /// HTML file relative to the manifest; required unless `status` is a failure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status: Option<FetchStatus>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
struct PagesManifest {
    pages: Vec<PageFixture>,
}

/// Local stand-ins for result pages, read from `<dir>/pages.json`.
///
/// URLs missing from the manifest behave as unreachable hosts.
#[derive(Debug, Clone, Default)]
pub struct FixturePages {
    dir: PathBuf,
    pages: HashMap<String, PageFixture>,
}

impl FixturePages {
    pub fn load(dir: &Path) -> Result<Self, ProviderError> {
        let path = dir.join("pages.json");
        let text = std::fs::read_to_string(&path).map_err(|e| ProviderError::ManifestError {
            path: path.clone(),
            reason: e.to_string(),
        })?;
        let manifest: PagesManifest =
            serde_json::from_str(&text).map_err(|e| ProviderError::ManifestError {
                path: path.clone(),
                reason: e.to_string(),
            })?;
        Ok(FixturePages {
            dir: dir.to_path_buf(),
            pages: manifest.pages.into_iter().map(|p| (p.url.clone(), p)).collect(),
        })
    }

    pub fn fetch(&self, url: &str) -> PageContent {
        let Some(fixture) = self.pages.get(url) else {
            return PageContent::failed(url, FetchStatus::Unreachable);
        };
        match (fixture.status, &fixture.path) {
            (Some(status), _) if status != FetchStatus::Ok => PageContent::failed(url, status),
            (_, Some(path)) => match std::fs::read(self.dir.join(path)) {
                Ok(raw) => purify_html(&raw, url),
                Err(_) => PageContent::failed(url, FetchStatus::HttpError { code: 404 }),
            },
            _ => PageContent::failed(url, FetchStatus::HttpError { code: 404 }),
        }
    }
}

/// Where result pages come from.
#[derive(Debug, Clone)]
pub enum PageSource {
    Http(HttpFetcher),
    Fixture(FixturePages),
    Offline(OfflineCorpus),
}

impl PageSource {
    pub async fn fetch(&self, url: &str, config: &ProviderConfig) -> PageContent {
        match self {
            PageSource::Http(f) => f.fetch(url, config).await,
            PageSource::Fixture(f) => f.fetch(url),
            PageSource::Offline(c) => c.fetch(url),
        }
    }
}
