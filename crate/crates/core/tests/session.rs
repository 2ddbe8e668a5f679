mod common;

use std::collections::BTreeMap;

use semrank::session::{project_view, SessionError};
use semrank::vsm::QueryWeighting;
use semrank::{Engine, Flag, RunOptions, SemrankConfig, SessionStore, ViewMode, WeightingConfig};

const GOLDEN: &str = "session/golden_session.json";

#[test]
fn three_engine_session_matches_golden() {
    let pipeline = common::fixture_pipeline("session", &Engine::WEB);
    let session = common::block_on(pipeline.run("dog food", &RunOptions::default())).unwrap();
    let actual = common::masked_json(&session);
    if std::env::var_os("SEMRANK_BLESS").is_some() {
        std::fs::write(common::fixture(GOLDEN), &actual).unwrap();
    }
    let golden = std::fs::read_to_string(common::fixture(GOLDEN)).unwrap();
    assert_eq!(actual, golden, "set SEMRANK_BLESS=1 to regenerate after an intended change");
}

#[test]
fn session_invariants_hold() {
    let pipeline = common::fixture_pipeline("session", &Engine::WEB);
    let s = common::block_on(pipeline.run("dog food", &RunOptions::default())).unwrap();
    assert_eq!(s.engine_scores.len(), 3);
    assert!(s.results.len() <= 60);
    for (i, r) in s.results.iter().enumerate() {
        assert_eq!(r.semantic_rank as usize, i + 1);
        assert!((0.0..=1.0).contains(&r.rsv));
    }
    for (engine, urls) in &s.classical_views {
        for url in urls {
            assert!(s.result(url).is_some(), "{engine}: {url} missing");
        }
    }
    for score in &s.engine_scores {
        assert!((0.0..=10.0).contains(&score.score));
    }
    let dead = s.result("https://gone.example/old-page").unwrap();
    assert!(dead.flags.contains(&Flag::DeadLink));
    assert!(dead.rsv == 0.0);
}

#[test]
fn identical_inputs_give_identical_sessions() {
    let pipeline = common::fixture_pipeline("session", &Engine::WEB);
    let a = common::block_on(pipeline.run("dog food", &RunOptions::default())).unwrap();
    let b = common::block_on(pipeline.run("dog food", &RunOptions::default())).unwrap();
    assert_ne!(a.session_id, b.session_id);
    assert_eq!(common::masked_json(&a), common::masked_json(&b));

    let offline = common::offline_pipeline("offline_dog", SemrankConfig::default());
    let a = common::block_on(offline.run("dog", &RunOptions::default())).unwrap();
    let b = common::block_on(offline.run("dog", &RunOptions::default())).unwrap();
    assert_eq!(common::masked_json(&a), common::masked_json(&b));
}

#[test]
fn only_matching_offline_doc_ranks_first() {
    let pipeline = common::offline_pipeline("offline_dog", SemrankConfig::default());
    let s = common::block_on(pipeline.run("dog", &RunOptions::default())).unwrap();
    assert_eq!(s.results.len(), 5);
    assert_eq!(s.results[0].entry.url, "https://offline.invalid/dog");
    assert_eq!(s.results[0].semantic_rank, 1);
    assert!(s.results[1..].iter().all(|r| r.rsv == 0.0));
}

#[test]
fn stopword_query_is_empty() {
    let pipeline = common::offline_pipeline("offline_dog", SemrankConfig::default());
    let err = common::block_on(pipeline.run("the of", &RunOptions::default())).unwrap_err();
    assert!(matches!(err, SessionError::EmptyQuery));
    let err = common::block_on(pipeline.run("   ", &RunOptions::default())).unwrap_err();
    assert!(matches!(err, SessionError::EmptyQuery));
}

#[test]
fn failing_engines_are_recorded_not_fatal() {
    // The criteria set only has a google SERP.
    let pipeline = common::fixture_pipeline("criteria", &Engine::WEB);
    let s = common::block_on(pipeline.run("dog food", &RunOptions::default())).unwrap();
    assert_eq!(s.engines_used, vec![Engine::Google]);
    let failed: Vec<Engine> = s.unavailable.iter().map(|f| f.engine).collect();
    assert_eq!(failed, vec![Engine::Yahoo, Engine::Bing]);
    assert_eq!(s.engine_scores.len(), 1);
    assert_eq!(s.config_snapshot.engines, Engine::WEB.to_vec());

    let opts = RunOptions {
        engines: Some(vec![Engine::Bing]),
        ..Default::default()
    };
    let err = common::block_on(pipeline.run("dog food", &opts)).unwrap_err();
    assert!(matches!(err, SessionError::AllProvidersFailed { ref failures } if failures.len() == 1));
}

#[test]
fn request_overrides_apply() {
    let pipeline = common::fixture_pipeline("session", &Engine::WEB);
    let opts = RunOptions {
        engines: Some(vec![Engine::Google]),
        top_n: Some(5),
        weighting: Some(WeightingConfig {
            query_weighting: QueryWeighting::Uniform,
            ..Default::default()
        }),
        ..Default::default()
    };
    let s = common::block_on(pipeline.run("dog food", &opts)).unwrap();
    assert_eq!(s.results.len(), 5);
    assert_eq!(s.config_snapshot.top_n, 5);
    assert_eq!(s.config_snapshot.weighting.query_weighting, QueryWeighting::Uniform);

    let bad = RunOptions {
        weighting: Some(WeightingConfig {
            alpha: 0.1,
            beta: 0.9,
            ..Default::default()
        }),
        ..Default::default()
    };
    assert!(matches!(
        common::block_on(pipeline.run("dog food", &bad)),
        Err(SessionError::InvalidRequest(_))
    ));
    let unknown = RunOptions {
        engines: Some(vec![Engine::Offline]),
        ..Default::default()
    };
    assert!(matches!(
        common::block_on(pipeline.run("dog food", &unknown)),
        Err(SessionError::UnknownEngine(_))
    ));
}

#[test]
fn dead_pages_never_move_closer() {
    let pipeline = common::fixture_pipeline("session", &Engine::WEB);
    let s = common::block_on(pipeline.run("dog food", &RunOptions::default())).unwrap();
    let max = s.results.iter().map(|r| r.distance).fold(0.0, f64::max);
    for r in s.results.iter().filter(|r| r.flags.contains(&Flag::DeadLink)) {
        assert_eq!(r.distance, max);
    }
}

#[test]
fn store_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let store = SessionStore::open(dir.path()).unwrap();
    let pipeline = common::fixture_pipeline("session", &Engine::WEB);
    let s = common::block_on(pipeline.run_session(&store, "dog food", &RunOptions::default())).unwrap();
    let loaded = store.get(&s.session_id).unwrap();
    assert_eq!(loaded, s);
    assert_eq!(
        serde_json::to_string(&loaded).unwrap(),
        serde_json::to_string(&s).unwrap()
    );
    let index = store.list().unwrap();
    assert_eq!(index.len(), 1);
    assert_eq!(index[0].id, s.session_id);
    assert_eq!(index[0].query, "dog food");
    assert!(dir.path().join(format!("{}.json", s.session_id)).exists());
}

#[test]
fn store_lookup_errors() {
    let dir = tempfile::tempdir().unwrap();
    let store = SessionStore::open(dir.path()).unwrap();
    assert!(matches!(store.get("not-a-uuid"), Err(SessionError::NotFound(_))));
    assert!(matches!(store.get("../../etc/passwd"), Err(SessionError::NotFound(_))));
    let id = "3f2b8c1e-0000-4000-8000-000000000000";
    assert!(matches!(store.get(id), Err(SessionError::NotFound(_))));

    let path = dir.path().join(format!("{id}.json"));
    std::fs::write(&path, "{\"session_id\": ").unwrap();
    match store.get(id) {
        Err(SessionError::StoreCorrupt { path: p, .. }) => assert_eq!(p, path),
        other => panic!("expected StoreCorrupt, got {other:?}"),
    }
}

fn snapshot(dir: &std::path::Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect()
}

#[test]
fn views_are_pure_projections() {
    let dir = tempfile::tempdir().unwrap();
    let store = SessionStore::open(dir.path()).unwrap();
    let pipeline = common::fixture_pipeline("session", &Engine::WEB);
    let s = common::block_on(pipeline.run_session(&store, "dog food", &RunOptions::default())).unwrap();
    let before = snapshot(dir.path());

    let semantic = store.rerank_view(&s.session_id, ViewMode::Semantic).unwrap();
    let urls: Vec<_> = semantic.items.iter().map(|i| i.url.clone()).collect();
    let expected: Vec<_> = s.results.iter().map(|r| r.entry.url.clone()).collect();
    assert_eq!(urls, expected);

    let google = store.rerank_view(&s.session_id, ViewMode::Classical(Engine::Google)).unwrap();
    let urls: Vec<_> = google.items.iter().map(|i| i.url.clone()).collect();
    assert_eq!(urls, s.classical_views[&Engine::Google]);
    let ranks: Vec<u32> = google.items.iter().map(|i| i.classical_rank).collect();
    assert_eq!(ranks, (1..=20).collect::<Vec<_>>());

    assert!(matches!(
        store.rerank_view(&s.session_id, ViewMode::Classical(Engine::Offline)),
        Err(SessionError::UnknownEngine(_))
    ));
    assert!(matches!(
        store.rerank_view("3f2b8c1e-0000-4000-8000-000000000000", ViewMode::Semantic),
        Err(SessionError::NotFound(_))
    ));
    assert_eq!(project_view(&s, ViewMode::Semantic).unwrap(), semantic);
    assert_eq!(snapshot(dir.path()), before);
}
