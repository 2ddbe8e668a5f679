//! Semantic ranking, engine scoring and result-quality criteria.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use url::Url;

use crate::content::{FetchStatus, PageContent};
use crate::providers::{Engine, ResultEntry};
use crate::vsm::{round12, AxisContribution};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RankingError {
    #[error("classical and semantic orders do not hold the same urls")]
    SetMismatch,
    #[error("cannot score an empty ranking")]
    EmptyRanking,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    DeadLink,
    Redundant,
    Parasite,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredResult {
    pub entry: ResultEntry,
    /// L1 distance to the query; lower is more relevant.
    pub distance: f64,
    /// Cosine correlation with the query, in `[0, 1]`.
    pub rsv: f64,
    /// Position in the pooled semantic order, from 1. Zero until ranked.
    pub semantic_rank: u32,
    pub flags: BTreeSet<Flag>,
    /// Per-axis weight breakdown of the document.
    pub contrib: Vec<AxisContribution>,
}

fn semantic_order(a: &ScoredResult, b: &ScoredResult) -> Ordering {
    round12(a.distance)
        .total_cmp(&round12(b.distance))
        .then_with(|| round12(b.rsv).total_cmp(&round12(a.rsv)))
        .then_with(|| a.entry.classical_rank.cmp(&b.entry.classical_rank))
        .then_with(|| a.entry.url.cmp(&b.entry.url))
        .then_with(|| a.entry.engine.cmp(&b.entry.engine))
}

/// Orders results by ascending distance, breaking ties by descending rsv,
/// then classical rank, then url, and numbers them from 1.
pub fn semantic_rank(mut scored: Vec<ScoredResult>) -> Vec<ScoredResult> {
    scored.sort_by(semantic_order);
    for (i, r) in scored.iter_mut().enumerate() {
        r.semantic_rank = i as u32 + 1;
    }
    scored
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineScore {
    pub engine: Engine,
    /// Agreement with the semantic order on a 0 to 10 scale.
    pub score: f64,
    pub footrule: u64,
    pub footrule_max: u64,
}

/// Restricts a pooled semantic order to the urls in `keep`.
pub fn restrict<'a>(pooled: &'a [String], keep: &[String]) -> Vec<&'a String> {
    let keep: HashSet<&String> = keep.iter().collect();
    pooled.iter().filter(|u| keep.contains(u)).collect()
}

/// Scores an engine by how closely its classical order matches the semantic
/// order of the same urls: `10 * (1 - F / floor(n^2 / 2))`, where `F` is the
/// Spearman footrule.
pub fn engine_score<S: AsRef<str>, T: AsRef<str>>(
    engine: Engine,
    classical_order: &[S],
    semantic_order: &[T],
) -> Result<EngineScore, RankingError> {
    let n = classical_order.len();
    if n != semantic_order.len() {
        return Err(RankingError::SetMismatch);
    }
    if n == 0 {
        return Err(RankingError::EmptyRanking);
    }
    let semantic_pos: HashMap<&str, usize> = semantic_order
        .iter()
        .enumerate()
        .map(|(i, u)| (u.as_ref(), i))
        .collect();
    if semantic_pos.len() != n {
        return Err(RankingError::SetMismatch);
    }
    let mut seen = HashSet::with_capacity(n);
    let mut footrule = 0u64;
    for (i, url) in classical_order.iter().enumerate() {
        let url = url.as_ref();
        let j = *semantic_pos.get(url).ok_or(RankingError::SetMismatch)?;
        if !seen.insert(url) {
            return Err(RankingError::SetMismatch);
        }
        footrule += i.abs_diff(j) as u64;
    }
    if n == 1 {
        return Ok(EngineScore {
            engine,
            score: 10.0,
            footrule: 0,
            footrule_max: 1,
        });
    }
    let footrule_max = (n as u64 * n as u64) / 2;
    let score = (10.0 * footrule_max.saturating_sub(footrule) as f64) / footrule_max as f64;
    Ok(EngineScore {
        engine,
        score: score.clamp(0.0, 10.0),
        footrule,
        footrule_max,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CriteriaConfig {
    /// Anchor-text share above which a page counts as a parasite.
    pub parasite_threshold: f64,
    /// Pages with less text than this are never parasites.
    pub parasite_min_text: usize,
}

impl Default for CriteriaConfig {
    fn default() -> Self {
        CriteriaConfig {
            parasite_threshold: 0.7,
            parasite_min_text: 200,
        }
    }
}

pub fn detect_dead(page: &PageContent) -> bool {
    match page.fetch_status {
        FetchStatus::Ok => false,
        FetchStatus::HttpError { code } => code >= 400,
        FetchStatus::Timeout | FetchStatus::Unreachable => true,
    }
}

pub fn detect_parasite(page: &PageContent, config: &CriteriaConfig) -> bool {
    page.fetch_status == FetchStatus::Ok
        && page.total_text_len > 0
        && page.total_text_len >= config.parasite_min_text
        && page.anchor_text_len as f64 / page.total_text_len as f64 > config.parasite_threshold
}

/// Normalized form used for redundancy checks: lowercase host, no default
/// port, no fragment, no trailing slash.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalizedUrl {
    pub host: String,
    pub path: String,
}

pub fn normalize_url(raw: &str) -> Option<NormalizedUrl> {
    let raw = raw.trim();
    let mut url = Url::parse(raw)
        .ok()
        .filter(|u| u.has_host())
        .or_else(|| Url::parse(&format!("http://{raw}")).ok())?;
    url.set_fragment(None);
    let host = url.host_str()?.to_ascii_lowercase();
    let host = match url.port() {
        Some(p) => format!("{host}:{p}"),
        None => host,
    };
    let mut path = url.path().trim_end_matches('/').to_string();
    if let Some(q) = url.query() {
        path.push('?');
        path.push_str(q);
    }
    Some(NormalizedUrl { host, path })
}

/// Urls whose host already appeared earlier in the same engine's list. The
/// first result for a host is never flagged.
pub fn detect_redundant(entries: &[ResultEntry]) -> BTreeSet<String> {
    let mut hosts = HashSet::new();
    let mut redundant = BTreeSet::new();
    for e in entries {
        let key = normalize_url(&e.url)
            .map(|n| n.host)
            .unwrap_or_else(|| e.url.to_ascii_lowercase());
        if !hosts.insert(key) {
            redundant.insert(e.url.clone());
        }
    }
    redundant
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineCriteria {
    pub engine: Engine,
    pub results: usize,
    pub dead_links: usize,
    pub redundant: usize,
    pub parasites: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriteriaReport {
    pub engines: Vec<EngineCriteria>,
}

impl CriteriaReport {
    pub fn for_engine(&self, engine: Engine) -> Option<&EngineCriteria> {
        self.engines.iter().find(|c| c.engine == engine)
    }
}

/// Counts dead links, same-host repeats and parasite pages per engine.
pub fn build_criteria_report(
    per_engine: &[(Engine, Vec<ResultEntry>)],
    pages: &HashMap<String, PageContent>,
    config: &CriteriaConfig,
) -> CriteriaReport {
    let engines = per_engine
        .iter()
        .map(|(engine, entries)| {
            let page_flag = |f: &dyn Fn(&PageContent) -> bool| {
                entries
                    .iter()
                    .filter(|e| pages.get(&e.url).is_some_and(f))
                    .count()
            };
            EngineCriteria {
                engine: *engine,
                results: entries.len(),
                dead_links: page_flag(&detect_dead),
                redundant: detect_redundant(entries).len(),
                parasites: page_flag(&|p| detect_parasite(p, config)),
            }
        })
        .collect();
    CriteriaReport { engines }
}
