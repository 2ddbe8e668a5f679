use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::PathBuf;
use std::sync::Arc;

use futures::stream::{self, StreamExt};
use serde::{Deserialize, Serialize};

use super::{ConfigSnapshot, EngineFailure, RankedSession, SessionError, SessionStore};
use crate::config::SemrankConfig;
use crate::content::{tokenize, PageContent, Stopwords};
use crate::providers::{
    Engine, ExtractionRules, FixturePages, FixtureProvider, HttpFetcher, LiveProvider, OfflineCorpus,
    PageSource, Provider, ProviderError, ResultEntry,
};
use crate::ranking::{
    build_criteria_report, detect_dead, detect_parasite, detect_redundant, engine_score, restrict,
    semantic_rank, CriteriaConfig, Flag, ScoredResult,
};
use crate::vsm::{build_doc_vector, build_query_vector, dist, rsv, AxisSet, DocVector, WeightingConfig};
use crate::wordnet::{expand_query, ExpansionConfig, SemanticVector, WordNetDb, WordNetError};

/// Where results and pages come from.
#[derive(Debug, Clone)]
pub enum Backend {
    /// Scrape the engines' live result pages and fetch result pages over HTTP.
    Live {
        engines: Vec<Engine>,
        rules_dir: Option<PathBuf>,
    },
    /// Replay `<dir>/<engine>.html` SERPs; result pages come from `<dir>/pages.json`.
    Fixtures {
        dir: PathBuf,
        engines: Vec<Engine>,
        rules_dir: Option<PathBuf>,
    },
    /// A local corpus with a `manifest.json`.
    Offline { dir: PathBuf },
}

/// Per-request overrides of the pipeline configuration.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunOptions {
    pub engines: Option<Vec<Engine>>,
    pub top_n: Option<usize>,
    pub expansion: Option<ExpansionConfig>,
    pub weighting: Option<WeightingConfig>,
    pub criteria: Option<CriteriaConfig>,
}

/// The search, extraction, projection, calculation and ranking stages wired
/// together. Immutable once built; one pipeline serves concurrent sessions.
#[derive(Debug)]
pub struct Pipeline {
    wordnet: Arc<WordNetDb>,
    stopwords: Stopwords,
    config: SemrankConfig,
    backend: &'static str,
    providers: Vec<Provider>,
    pages: PageSource,
}

impl Pipeline {
    pub fn new(wordnet: Arc<WordNetDb>, config: SemrankConfig, backend: Backend) -> Result<Self, ProviderError> {
        let (name, providers, pages) = match backend {
            Backend::Live { engines, rules_dir } => {
                let providers = engines
                    .iter()
                    .map(|&e| {
                        let rules = ExtractionRules::load(e, rules_dir.as_deref())?;
                        LiveProvider::new(e, rules, &config.providers).map(Provider::Live)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                ("live", providers, PageSource::Http(HttpFetcher::new(&config.providers)?))
            }
            Backend::Fixtures {
                dir,
                engines,
                rules_dir,
            } => {
                let providers = engines
                    .iter()
                    .map(|&e| {
                        let rules = ExtractionRules::load(e, rules_dir.as_deref())?;
                        Ok(Provider::Fixture(FixtureProvider::new(e, &dir, rules)))
                    })
                    .collect::<Result<Vec<_>, ProviderError>>()?;
                ("fixtures", providers, PageSource::Fixture(FixturePages::load(&dir)?))
            }
            Backend::Offline { dir } => {
                let corpus = OfflineCorpus::open(&dir)?;
                (
                    "offline",
                    vec![Provider::Offline(corpus.clone())],
                    PageSource::Offline(corpus),
                )
            }
        };
        Ok(Pipeline {
            wordnet,
            stopwords: Stopwords::english().clone(),
            config,
            backend: name,
            providers,
            pages,
        })
    }

    pub fn with_stopwords(mut self, stopwords: Stopwords) -> Self {
        self.stopwords = stopwords;
        self
    }

    pub fn config(&self) -> &SemrankConfig {
        &self.config
    }

    pub fn wordnet(&self) -> &WordNetDb {
        &self.wordnet
    }

    pub fn engines(&self) -> Vec<Engine> {
        self.providers.iter().map(Provider::engine).collect()
    }

    pub fn expand(&self, query: &str) -> Result<SemanticVector, SessionError> {
        self.expand_with(query, &self.config.expansion)
    }

    fn expand_with(&self, query: &str, config: &ExpansionConfig) -> Result<SemanticVector, SessionError> {
        expand_query(&self.wordnet, query, config, &self.stopwords).map_err(|e| match e {
            WordNetError::EmptyQuery => SessionError::EmptyQuery,
            other => SessionError::InvalidRequest(other.to_string()),
        })
    }

    fn effective_config(&self, opts: &RunOptions) -> Result<SemrankConfig, SessionError> {
        let mut config = self.config.clone();
        if let Some(n) = opts.top_n {
            config.providers.top_n = n;
        }
        if let Some(e) = &opts.expansion {
            config.expansion = e.clone();
        }
        if let Some(w) = opts.weighting {
            config.weighting = w;
        }
        if let Some(c) = opts.criteria {
            config.criteria = c;
        }
        config
            .validate()
            .map_err(|e| SessionError::InvalidRequest(e.to_string()))?;
        Ok(config)
    }

    fn selected_providers(&self, opts: &RunOptions) -> Result<Vec<&Provider>, SessionError> {
        let Some(wanted) = &opts.engines else {
            return Ok(self.providers.iter().collect());
        };
        wanted
            .iter()
            .map(|e| {
                self.providers
                    .iter()
                    .find(|p| p.engine() == *e)
                    .ok_or_else(|| SessionError::UnknownEngine(e.to_string()))
            })
            .collect()
    }

    /// Runs the whole pipeline and persists the session before returning it.
    pub async fn run_session(
        &self,
        store: &SessionStore,
        query: &str,
        opts: &RunOptions,
    ) -> Result<RankedSession, SessionError> {
        let session = self.run(query, opts).await?;
        store.save(&session)?;
        Ok(session)
    }

    /// Runs the whole pipeline without persisting.
    pub async fn run(&self, query: &str, opts: &RunOptions) -> Result<RankedSession, SessionError> {
        let config = self.effective_config(opts)?;
        let semantic_vector = self.expand_with(query, &config.expansion)?;
        let providers = self.selected_providers(opts)?;

        let searches = providers.iter().map(|p| p.search(query, &config.providers));
        let outcomes = futures::future::join_all(searches).await;
        let mut per_engine: Vec<(Engine, Vec<ResultEntry>)> = Vec::new();
        let mut unavailable = Vec::new();
        for (provider, outcome) in providers.iter().zip(outcomes) {
            match outcome {
                Ok(entries) if !entries.is_empty() => per_engine.push((provider.engine(), entries)),
                Ok(_) => unavailable.push(EngineFailure {
                    engine: provider.engine(),
                    reason: "no results".into(),
                }),
                Err(ProviderError::EmptyQuery) => return Err(SessionError::EmptyQuery),
                Err(e) => {
                    tracing::warn!(engine = %provider.engine(), error = %e, "engine unavailable");
                    unavailable.push(EngineFailure {
                        engine: provider.engine(),
                        reason: e.to_string(),
                    })
                }
            }
        }
        if per_engine.is_empty() {
            return Err(SessionError::AllProvidersFailed {
                failures: unavailable,
            });
        }

        // Deduplicated union; a url listed by several engines keeps its best-ranked entry.
        let mut pool: BTreeMap<String, ResultEntry> = BTreeMap::new();
        for entry in per_engine.iter().flat_map(|(_, entries)| entries) {
            pool.entry(entry.url.clone())
                .and_modify(|kept| {
                    if (entry.classical_rank, entry.engine) < (kept.classical_rank, kept.engine) {
                        *kept = entry.clone();
                    }
                })
                .or_insert_with(|| entry.clone());
        }

        let pages: HashMap<String, PageContent> = stream::iter(pool.keys().cloned())
            .map(|url| {
                let cfg = &config.providers;
                async move {
                    let page = self.pages.fetch(&url, cfg).await;
                    (url, page)
                }
            })
            .buffered(config.providers.max_parallel_fetches)
            .collect()
            .await;

        tracing::debug!(pooled = pages.len(), engines = per_engine.len(), "pages fetched");

        let axes = AxisSet::from(&semantic_vector);
        let vectors: Vec<DocVector> = pool
            .keys()
            .map(|url| match tokenize(&pages[url].weighting_text(), &self.stopwords) {
                Ok(doc) => build_doc_vector(&doc.with_id(url.clone()), &axes, &config.weighting),
                Err(_) => DocVector::zero(url.clone(), axes.dimension()),
            })
            .collect();
        let query_vector = build_query_vector(&axes, &vectors, &config.weighting)
            .map_err(|e| SessionError::InvalidRequest(e.to_string()))?;

        let redundant: BTreeSet<String> = per_engine
            .iter()
            .flat_map(|(_, entries)| detect_redundant(entries))
            .collect();

        let scored = pool
            .into_values()
            .zip(vectors)
            .map(|(entry, vector)| {
                let page = &pages[&entry.url];
                let mut flags = BTreeSet::new();
                if detect_dead(page) {
                    flags.insert(Flag::DeadLink);
                }
                if detect_parasite(page, &config.criteria) {
                    flags.insert(Flag::Parasite);
                }
                if redundant.contains(&entry.url) {
                    flags.insert(Flag::Redundant);
                }
                // Both vectors share the axis set, so dimensions always agree.
                let distance = dist(&query_vector, &vector).expect("same dimension");
                let rsv = rsv(&query_vector, &vector).expect("same dimension");
                ScoredResult {
                    entry,
                    distance,
                    rsv,
                    semantic_rank: 0,
                    flags,
                    contrib: vector.contrib,
                }
            })
            .collect();
        let results = semantic_rank(scored);
        let pooled_order: Vec<String> = results.iter().map(|r| r.entry.url.clone()).collect();

        let mut classical_views = BTreeMap::new();
        let mut engine_scores = Vec::with_capacity(per_engine.len());
        for (engine, entries) in &per_engine {
            let classical: Vec<String> = entries.iter().map(|e| e.url.clone()).collect();
            let semantic = restrict(&pooled_order, &classical);
            let score = engine_score(*engine, &classical, &semantic)
                .expect("engine urls are a subset of the pool");
            engine_scores.push(score);
            classical_views.insert(*engine, classical);
        }
        let criteria = build_criteria_report(&per_engine, &pages, &config.criteria);

        Ok(RankedSession {
            session_id: uuid::Uuid::new_v4().to_string(),
            query: query.to_string(),
            semantic_vector,
            engines_used: per_engine.iter().map(|(e, _)| *e).collect(),
            unavailable,
            results,
            classical_views,
            engine_scores,
            criteria,
            config_snapshot: ConfigSnapshot {
                backend: self.backend.to_string(),
                engines: providers.iter().map(|p| p.engine()).collect(),
                expansion: config.expansion,
                weighting: config.weighting,
                criteria: config.criteria,
                top_n: config.providers.top_n,
                timeout_ms: config.providers.timeout_ms,
                max_parallel_fetches: config.providers.max_parallel_fetches,
            },
            created_at: chrono::Utc::now(),
        })
    }
}
