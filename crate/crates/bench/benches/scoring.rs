use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::seq::SliceRandom;
use semrank::vsm::{dist, rsv};
use semrank::{engine_score, semantic_rank, Engine};
use semrank_bench::{rng, scored_pool, vector_pair};

fn vectors(c: &mut Criterion) {
    let mut group = c.benchmark_group("vsm");
    for dim in [2usize, 10, 50] {
        let (q, d) = vector_pair(&mut rng(1), dim);
        group.bench_with_input(BenchmarkId::new("dist", dim), &dim, |b, _| {
            b.iter(|| dist(black_box(&q), black_box(&d)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("rsv", dim), &dim, |b, _| {
            b.iter(|| rsv(black_box(&q), black_box(&d)).unwrap())
        });
    }
    group.finish();
}

fn ranking(c: &mut Criterion) {
    let pool = scored_pool(&mut rng(2), 60);
    c.bench_function("semantic_rank 60", |b| b.iter(|| semantic_rank(black_box(pool.clone()))));

    let mut group = c.benchmark_group("engine_score");
    for n in [10usize, 20, 50] {
        let classical: Vec<String> = (0..n).map(|i| format!("https://u{i}.test/")).collect();
        let mut semantic = classical.clone();
        semantic.shuffle(&mut rng(3));
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| engine_score(Engine::Google, black_box(&classical), black_box(&semantic)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, vectors, ranking);
criterion_main!(benches);
