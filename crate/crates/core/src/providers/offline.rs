use std::collections::HashMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{Engine, ProviderConfig, ProviderError, ResultEntry};
use crate::content::{purify_html, FetchStatus, PageContent};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusDoc {
    pub id: String,
    pub path: String,
    #[serde(default)]
    pub title: String,
    #[serde(default, rename = "abstract")]
    pub abstract_text: String,
    #[serde(default)]
    pub url: Option<String>,
}

impl CorpusDoc {
    pub fn url(&self) -> String {
        self.url
            .clone()
            .unwrap_or_else(|| format!("https://offline.invalid/{}", self.id))
    }
}

/// `manifest.json` of an offline corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub docs: Vec<CorpusDoc>,
}

/// A directory of local documents acting as a deterministic search engine.
#[derive(Debug, Clone)]
pub struct OfflineCorpus {
    dir: PathBuf,
    manifest: CorpusManifest,
    by_url: HashMap<String, usize>,
}

impl OfflineCorpus {
    pub const MANIFEST: &'static str = "manifest.json";

    pub fn open(dir: &Path) -> Result<Self, ProviderError> {
        let path = dir.join(Self::MANIFEST);
        let err = |reason: String| ProviderError::ManifestError {
            path: path.clone(),
            reason,
        };
        let text = std::fs::read_to_string(&path).map_err(|e| err(e.to_string()))?;
        let manifest: CorpusManifest = serde_json::from_str(&text).map_err(|e| err(e.to_string()))?;
        let mut by_url = HashMap::new();
        for (i, doc) in manifest.docs.iter().enumerate() {
            let url = doc.url();
            url::Url::parse(&url).map_err(|e| err(format!("doc `{}`: bad url: {e}", doc.id)))?;
            if by_url.insert(url, i).is_some() {
                return Err(err(format!("doc `{}`: duplicate url", doc.id)));
            }
        }
        Ok(OfflineCorpus {
            dir: dir.to_path_buf(),
            manifest,
            by_url,
        })
    }

    pub fn manifest(&self) -> &CorpusManifest {
        &self.manifest
    }

    /// Manifest order truncated to `top_n`; the query does not filter.
    pub fn search(&self, config: &ProviderConfig) -> Vec<ResultEntry> {
        self.manifest
            .docs
            .iter()
            .take(config.top_n)
            .enumerate()
            .map(|(i, d)| ResultEntry {
                engine: Engine::Offline,
                classical_rank: i as u32 + 1,
                title: d.title.clone(),
                abstract_text: d.abstract_text.clone(),
                url: d.url(),
            })
            .collect()
    }

    pub fn fetch(&self, url: &str) -> PageContent {
        let Some(&i) = self.by_url.get(url) else {
            return PageContent::failed(url, FetchStatus::Unreachable);
        };
        match std::fs::read(self.dir.join(&self.manifest.docs[i].path)) {
            Ok(raw) => purify_html(&raw, url),
            Err(_) => PageContent::failed(url, FetchStatus::HttpError { code: 404 }),
        }
    }
}

/// Searches the corpus in `corpus_dir`.
pub fn offline_search(
    corpus_dir: &Path,
    query: &str,
    config: &ProviderConfig,
) -> Result<Vec<ResultEntry>, ProviderError> {
    if query.trim().is_empty() {
        return Err(ProviderError::EmptyQuery);
    }
    Ok(OfflineCorpus::open(corpus_dir)?.search(config))
}
