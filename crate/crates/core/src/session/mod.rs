//! Search sessions: the full pipeline, its persisted result, and read-only
//! views over it.

mod pipeline;
mod store;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::providers::Engine;
use crate::ranking::{CriteriaReport, EngineScore, Flag, ScoredResult};
use crate::wordnet::SemanticVector;

pub use pipeline::{Backend, Pipeline, RunOptions};
pub use store::{IndexEntry, SessionStore};

#[derive(Debug, thiserror::Error)]
pub enum SessionError {
    #[error("query is empty after normalization")]
    EmptyQuery,
    #[error("no search engine returned results: {}", describe_failures(.failures))]
    AllProvidersFailed { failures: Vec<EngineFailure> },
    #[error("session `{0}` not found")]
    NotFound(String),
    #[error("session store file {path} is corrupt: {reason}")]
    StoreCorrupt { path: PathBuf, reason: String },
    #[error("engine `{0}` is not part of this session")]
    UnknownEngine(String),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("session store I/O on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn describe_failures(failures: &[EngineFailure]) -> String {
    if failures.is_empty() {
        return "no engines configured".into();
    }
    failures
        .iter()
        .map(|f| format!("{}: {}", f.engine, f.reason))
        .collect::<Vec<_>>()
        .join("; ")
}

/// An engine that produced nothing for this session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineFailure {
    pub engine: Engine,
    pub reason: String,
}

/// Everything that influenced a session's numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigSnapshot {
    pub backend: String,
    pub engines: Vec<Engine>,
    pub expansion: crate::wordnet::ExpansionConfig,
    pub weighting: crate::vsm::WeightingConfig,
    pub criteria: crate::ranking::CriteriaConfig,
    pub top_n: usize,
    pub timeout_ms: u64,
    pub max_parallel_fetches: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedSession {
    pub session_id: String,
    pub query: String,
    pub semantic_vector: SemanticVector,
    pub engines_used: Vec<Engine>,
    #[serde(default)]
    pub unavailable: Vec<EngineFailure>,
    /// Pooled results in semantic order.
    pub results: Vec<ScoredResult>,
    /// Each engine's own url order.
    pub classical_views: BTreeMap<Engine, Vec<String>>,
    pub engine_scores: Vec<EngineScore>,
    pub criteria: CriteriaReport,
    pub config_snapshot: ConfigSnapshot,
    pub created_at: DateTime<Utc>,
}

impl RankedSession {
    pub fn concept_tree(&self) -> ConceptTree {
        ConceptTree::from(&self.semantic_vector)
    }

    pub fn result(&self, url: &str) -> Option<&ScoredResult> {
        self.results.iter().find(|r| r.entry.url == url)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "engine", rename_all = "lowercase")]
pub enum ViewMode {
    Semantic,
    Classical(Engine),
}

impl ViewMode {
    /// Parses the `mode` and optional `engine` query parameters.
    pub fn parse(mode: &str, engine: Option<&str>) -> Result<ViewMode, SessionError> {
        match mode {
            "semantic" => Ok(ViewMode::Semantic),
            "classical" => {
                let name = engine.ok_or_else(|| {
                    SessionError::InvalidRequest("classical mode needs an engine".into())
                })?;
                Engine::from_str(name)
                    .map(ViewMode::Classical)
                    .map_err(|_| SessionError::UnknownEngine(name.to_string()))
            }
            other => Err(SessionError::InvalidRequest(format!(
                "unknown mode `{other}` (semantic|classical)"
            ))),
        }
    }
}

impl fmt::Display for ViewMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViewMode::Semantic => f.write_str("semantic"),
            ViewMode::Classical(e) => write!(f, "classical({e})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViewItem {
    pub position: u32,
    pub url: String,
    pub title: String,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
    pub engine: Engine,
    /// Rank in the viewed engine's list (classical mode) or in the listing engine's list.
    pub classical_rank: u32,
    pub semantic_rank: u32,
    pub rsv: f64,
    pub distance: f64,
    pub flags: BTreeSet<Flag>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedView {
    pub session_id: String,
    pub mode: ViewMode,
    pub items: Vec<ViewItem>,
}

/// Re-projects a stored session into one ranking. Nothing is fetched or rescored.
pub fn project_view(session: &RankedSession, mode: ViewMode) -> Result<RankedView, SessionError> {
    let item = |position: usize, r: &ScoredResult, classical_rank: u32| ViewItem {
        position: position as u32 + 1,
        url: r.entry.url.clone(),
        title: r.entry.title.clone(),
        abstract_text: r.entry.abstract_text.clone(),
        engine: r.entry.engine,
        classical_rank,
        semantic_rank: r.semantic_rank,
        rsv: r.rsv,
        distance: r.distance,
        flags: r.flags.clone(),
    };
    let items = match mode {
        ViewMode::Semantic => session
            .results
            .iter()
            .enumerate()
            .map(|(i, r)| item(i, r, r.entry.classical_rank))
            .collect(),
        ViewMode::Classical(engine) => {
            let urls = session
                .classical_views
                .get(&engine)
                .ok_or_else(|| SessionError::UnknownEngine(engine.to_string()))?;
            urls.iter()
                .enumerate()
                .map(|(i, url)| {
                    session
                        .result(url)
                        .map(|r| item(i, r, i as u32 + 1))
                        .ok_or_else(|| SessionError::StoreCorrupt {
                            path: PathBuf::from(&session.session_id),
                            reason: format!("classical url {url} missing from results"),
                        })
                })
                .collect::<Result<_, _>>()?
        }
    };
    Ok(RankedView {
        session_id: session.session_id.clone(),
        mode,
        items,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptNode {
    pub term: String,
    pub synonyms: Vec<String>,
    pub hypernyms: Vec<String>,
}

/// Two-level tree per query term, derived from a semantic vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptTree {
    pub roots: Vec<ConceptNode>,
}

impl From<&SemanticVector> for ConceptTree {
    fn from(sv: &SemanticVector) -> Self {
        ConceptTree {
            roots: sv
                .entries
                .iter()
                .map(|e| ConceptNode {
                    term: e.term.clone(),
                    synonyms: e.synonyms.iter().cloned().collect(),
                    hypernyms: e.hypernyms.iter().cloned().collect(),
                })
                .collect(),
        }
    }
}
