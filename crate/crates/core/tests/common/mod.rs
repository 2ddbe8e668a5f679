#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::{Arc, OnceLock};

use semrank::{Backend, Engine, Pipeline, RankedSession, SemrankConfig, WordNetDb};

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

pub fn mini_wordnet() -> Arc<WordNetDb> {
    static DB: OnceLock<Arc<WordNetDb>> = OnceLock::new();
    DB.get_or_init(|| Arc::new(WordNetDb::load_dir(fixture("wordnet")).expect("mini wordnet loads")))
        .clone()
}

pub fn fixture_pipeline(set: &str, engines: &[Engine]) -> Pipeline {
    Pipeline::new(
        mini_wordnet(),
        SemrankConfig::default(),
        Backend::Fixtures {
            dir: fixture(set),
            engines: engines.to_vec(),
            rules_dir: None,
        },
    )
    .expect("fixture pipeline")
}

pub fn offline_pipeline(set: &str, config: SemrankConfig) -> Pipeline {
    Pipeline::new(mini_wordnet(), config, Backend::Offline { dir: fixture(set) }).expect("offline pipeline")
}

/// Session JSON with the run-specific id and timestamp blanked out.
pub fn masked_json(session: &RankedSession) -> String {
    let mut value = serde_json::to_value(session).expect("session serializes");
    value["session_id"] = serde_json::Value::String("<masked>".into());
    value["created_at"] = serde_json::Value::String("<masked>".into());
    let mut text = serde_json::to_string_pretty(&value).expect("value serializes");
    text.push('\n');
    text
}

pub fn block_on<F: std::future::Future>(f: F) -> F::Output {
    tokio::runtime::Builder::new_current_thread()
        .enable_all()
        .build()
        .expect("runtime")
        .block_on(f)
}
