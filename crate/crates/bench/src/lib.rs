//! Input generators shared by the benchmarks.

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use semrank::{DocVector, Engine, QueryVector, ResultEntry, ScoredResult};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn vector_pair(rng: &mut StdRng, dim: usize) -> (QueryVector, DocVector) {
    let q = QueryVector {
        weights: (0..dim).map(|_| rng.gen_range(1.0..3.0)).collect(),
    };
    let d = DocVector {
        weights: (0..dim).map(|_| rng.gen_range(0.0..1.5)).collect(),
        ..DocVector::zero("bench", 0)
    };
    (q, d)
}

/// A pooled result set with plenty of exact ties.
pub fn scored_pool(rng: &mut StdRng, n: usize) -> Vec<ScoredResult> {
    let engines = [Engine::Google, Engine::Yahoo, Engine::Bing];
    (0..n)
        .map(|i| ScoredResult {
            entry: ResultEntry {
                engine: engines[i % 3],
                classical_rank: (i % 20) as u32 + 1,
                title: format!("result {i}"),
                abstract_text: String::new(),
                url: format!("https://host{}.test/{i}", i % 11),
            },
            distance: f64::from(rng.gen_range(0..40u8)) * 0.125,
            rsv: rng.gen_range(0.0..1.0),
            semantic_rank: 0,
            flags: BTreeSet::new(),
            contrib: Vec::new(),
        })
        .collect()
}

/// A synthetic article page of roughly `paragraphs * 60` words.
pub fn article_html(rng: &mut StdRng, paragraphs: usize) -> String {
    const WORDS: [&str; 12] = [
        "dog", "food", "canine", "nutrient", "the", "walk", "park", "meat", "of", "owner", "daily", "protein",
    ];
    let mut html = String::from("<html><head><title>Bench page</title><script>var a=1;</script></head><body><nav><a href='/'>Home</a></nav>");
    for _ in 0..paragraphs {
        html.push_str("<p>");
        for w in 0..60 {
            if w % 15 == 0 {
                html.push_str("<a href='/x'>link text</a> ");
            }
            html.push_str(WORDS[rng.gen_range(0..WORDS.len())]);
            html.push(' ');
        }
        html.push_str("</p>");
    }
    html.push_str("</body></html>");
    html
}
