//! `semrank` command line and HTTP service.

pub mod api;
pub mod args;
pub mod render;

use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context};
use semrank::{Backend, Engine, Pipeline, SemrankConfig, Stopwords, WordNetDb};

use args::{BackendArgs, CommonArgs};

/// Builds the effective configuration: TOML file, then flags, then environment.
pub fn load_config(common: &CommonArgs) -> anyhow::Result<SemrankConfig> {
    let mut config = match &common.config {
        Some(path) => SemrankConfig::load(path)?,
        None => SemrankConfig::default(),
    };
    if let Some(n) = common.top_n {
        config.providers.top_n = n;
    }
    if let Some(a) = common.alpha {
        config.weighting.alpha = a;
    }
    if let Some(b) = common.beta {
        config.weighting.beta = b;
    }
    if let Some(w) = common.query_weighting {
        config.weighting.query_weighting = w;
    }
    config.providers = config.providers.with_env();
    config.validate()?;
    Ok(config)
}

pub fn load_wordnet(common: &CommonArgs) -> anyhow::Result<Arc<WordNetDb>> {
    let Some(dir) = &common.wordnet_dir else {
        bail!("no WordNet dictionary: pass --wordnet-dir or set SEMRANK_WORDNET_DIR");
    };
    let db = WordNetDb::load_dir(dir).with_context(|| format!("loading WordNet from {}", dir.display()))?;
    tracing::info!(synsets = db.synset_count(), "wordnet loaded");
    Ok(Arc::new(db))
}

pub fn load_stopwords(path: Option<&Path>) -> anyhow::Result<Stopwords> {
    Ok(match path {
        Some(p) => Stopwords::from_file(p)?,
        None => Stopwords::english().clone(),
    })
}

/// Live scraping only happens when engines are named explicitly.
pub fn backend(args: &BackendArgs, common: &CommonArgs) -> anyhow::Result<Backend> {
    if let Some(dir) = &args.offline {
        return Ok(Backend::Offline { dir: dir.clone() });
    }
    if let Some(dir) = &args.fixtures {
        return Ok(Backend::Fixtures {
            dir: dir.clone(),
            engines: args.engines.clone().unwrap_or_else(|| Engine::WEB.to_vec()),
            rules_dir: common.rules_dir.clone(),
        });
    }
    match &args.engines {
        Some(engines) => Ok(Backend::Live {
            engines: engines.clone(),
            rules_dir: common.rules_dir.clone(),
        }),
        None => bail!("no result source: pass --offline DIR, --fixtures DIR, or --engines to scrape live engines"),
    }
}

pub fn build_pipeline(common: &CommonArgs, backend_args: &BackendArgs) -> anyhow::Result<Pipeline> {
    let backend = backend(backend_args, common)?;
    let config = load_config(common)?;
    let wordnet = load_wordnet(common)?;
    let stopwords = load_stopwords(common.stopwords.as_deref())?;
    Ok(Pipeline::new(wordnet, config, backend)?.with_stopwords(stopwords))
}
