use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(rel)
}

fn semrank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semrank"))
        .args(args)
        .env("SEMRANK_WORDNET_DIR", fixture("wordnet"))
        .env_remove("RUST_LOG")
        .output()
        .unwrap()
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn expand_prints_sorted_sets() {
    let v = stdout_json(&semrank(&["expand", "dog food"]));
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 2);
    assert_eq!(entries[0]["term"], "dog");
    for e in entries {
        for key in ["synonyms", "hypernyms"] {
            let items: Vec<&str> = e[key].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
            let mut sorted = items.clone();
            sorted.sort();
            assert_eq!(items, sorted);
        }
    }
}

#[test]
fn custom_stopwords_apply_to_queries() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("stop.txt");
    std::fs::write(&path, "# only this word\nfood\n").unwrap();
    let v = stdout_json(&semrank(&["expand", "the dog food", "--stopwords", path.to_str().unwrap()]));
    let terms: Vec<&str> = v["entries"].as_array().unwrap().iter().map(|e| e["term"].as_str().unwrap()).collect();
    assert_eq!(terms, vec!["the", "dog"]);
}

#[test]
fn search_fixtures_json() {
    let dir = fixture("session");
    let v = stdout_json(&semrank(&["search", "dog food", "--fixtures", dir.to_str().unwrap(), "--json"]));
    assert_eq!(v["results"].as_array().unwrap().len(), 22);
    assert_eq!(v["engine_scores"].as_array().unwrap().len(), 3);

    let v = stdout_json(&semrank(&[
        "search", "dog food", "--fixtures", dir.to_str().unwrap(), "--engines", "google", "--top-n", "5", "--json",
    ]));
    assert_eq!(v["engines_used"], serde_json::json!(["google"]));
    assert_eq!(v["results"].as_array().unwrap().len(), 5);
}

#[test]
fn search_table_and_persistence() {
    let sessions = tempfile::tempdir().unwrap();
    let out = semrank(&[
        "search",
        "dog",
        "--offline",
        fixture("offline_dog").to_str().unwrap(),
        "--table",
        "--sessions-dir",
        sessions.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Walking the dog"));
    assert!(text.lines().any(|l| l.trim_start().starts_with("offline")));
    let index = std::fs::read_to_string(sessions.path().join("index.jsonl")).unwrap();
    assert_eq!(index.lines().count(), 1);
}

#[test]
fn config_file_and_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("semrank.toml");
    std::fs::write(&path, "[weighting]\nalpha = 0.9\nquery_weighting = \"uniform\"\n").unwrap();
    let corpus = fixture("offline_gain");
    let v = stdout_json(&semrank(&[
        "search", "dog", "--offline", corpus.to_str().unwrap(), "--config", path.to_str().unwrap(), "--beta", "0.1", "--json",
    ]));
    let w = &v["config_snapshot"]["weighting"];
    assert_eq!(w["alpha"], 0.9);
    assert_eq!(w["beta"], 0.1);
    assert_eq!(w["query_weighting"], "uniform");
}

#[test]
fn usage_errors_fail_cleanly() {
    let out = semrank(&["search", "the of", "--offline", fixture("offline_dog").to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty"));

    let out = semrank(&["search", "dog", "--alpha", "0.1", "--beta", "0.5", "--offline", "x"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("beta"));

    let out = semrank(&["search", "dog", "--engines", "altavista"]);
    assert!(!out.status.success());

    let out = semrank(&["search", "dog"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("no result source"));

    let out = Command::new(env!("CARGO_BIN_EXE_semrank"))
        .args(["expand", "dog"])
        .env_remove("SEMRANK_WORDNET_DIR")
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--wordnet-dir"));
}
