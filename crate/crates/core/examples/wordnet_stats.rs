//! Prints per-part-of-speech counts for a WordNet database directory.
//!
//! `cargo run --release --example wordnet_stats -- /usr/share/wordnet`

use std::process::ExitCode;

fn main() -> ExitCode {
    let Some(dir) = std::env::args().nth(1).or_else(|| std::env::var("SEMRANK_WORDNET_DIR").ok()) else {
        eprintln!("usage: wordnet_stats <wordnet-dict-dir>");
        return ExitCode::FAILURE;
    };
    let start = std::time::Instant::now();
    let db = match semrank::WordNetDb::load_dir(&dir) {
        Ok(db) => db,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    let elapsed = start.elapsed();
    let stats = db.stats();
    println!("{:<10} {:>8} {:>8} {:>8}", "pos", "words", "synsets", "pairs");
    for (pos, s) in &stats.per_pos {
        println!("{:<10} {:>8} {:>8} {:>8}", pos.to_string(), s.words, s.synsets, s.pairs);
    }
    let t = stats.total();
    println!("{:<10} {:>8} {:>8} {:>8}", "total", t.words, t.synsets, t.pairs);
    println!("loaded in {elapsed:.2?}");
    ExitCode::SUCCESS
}
