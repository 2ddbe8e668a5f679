//! Ontology-driven semantic re-ranking of meta-search results.
//!
//! A query is projected onto WordNet (synonyms and hypernyms of each term),
//! each engine's top results are fetched and purified, every page is weighted
//! against the expanded query axes, and the pooled results are re-ranked by
//! their distance to the query. Each engine is then scored by how well its own
//! order agrees with the semantic one.
//!
//! ```no_run
//! use std::sync::Arc;
//! use semrank::{Backend, Pipeline, RunOptions, SemrankConfig, SessionStore, WordNetDb};
//!
//! # async fn demo() -> Result<(), Box<dyn std::error::Error>> {
//! let wordnet = Arc::new(WordNetDb::load_dir("/usr/share/wordnet")?);
//! let pipeline = Pipeline::new(
//!     wordnet,
//!     SemrankConfig::default(),
//!     Backend::Offline { dir: "corpus".into() },
//! )?;
//! let store = SessionStore::open("sessions")?;
//! let session = pipeline.run_session(&store, "dog", &RunOptions::default()).await?;
//! println!("{}", session.results[0].entry.url);
//! # Ok(())
//! # }
//! ```

pub mod config;
pub mod content;
pub mod providers;
pub mod ranking;
pub mod session;
pub mod vsm;
pub mod wordnet;

pub use config::SemrankConfig;
pub use content::{purify_html, tokenize, FetchStatus, PageContent, Stopwords, TokenizedDoc};
pub use providers::{Engine, ProviderConfig, ResultEntry};
pub use ranking::{engine_score, semantic_rank, CriteriaReport, EngineScore, Flag, ScoredResult};
pub use session::{
    Backend, ConceptTree, Pipeline, RankedSession, RankedView, RunOptions, SessionError,
    SessionStore, ViewMode,
};
pub use vsm::{AxisSet, DocVector, QueryVector, WeightingConfig};
pub use wordnet::{expand_query, ExpansionConfig, Pos, SemanticVector, WordNetDb};
