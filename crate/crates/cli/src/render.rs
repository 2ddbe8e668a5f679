use std::fmt::Write;

use semrank::{Flag, RankedSession};

fn flag_marks(flags: &std::collections::BTreeSet<Flag>) -> String {
    flags
        .iter()
        .map(|f| match f {
            Flag::DeadLink => "dead",
            Flag::Redundant => "redundant",
            Flag::Parasite => "parasite",
        })
        .collect::<Vec<_>>()
        .join(",")
}

fn clip(s: &str, width: usize) -> String {
    if s.chars().count() <= width {
        return s.to_string();
    }
    let mut out: String = s.chars().take(width.saturating_sub(3)).collect();
    out.push_str("...");
    out
}

/// Plain-text report: ranked results, engine scores and criteria counts.
pub fn session_table(session: &RankedSession) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "query: {}  session: {}", session.query, session.session_id);
    for e in &session.semantic_vector.entries {
        let syn: Vec<_> = e.synonyms.iter().map(String::as_str).collect();
        let hyp: Vec<_> = e.hypernyms.iter().map(String::as_str).collect();
        let _ = writeln!(out, "  {}: synonyms [{}] hypernyms [{}]", e.term, syn.join(", "), hyp.join(", "));
    }
    for f in &session.unavailable {
        let _ = writeln!(out, "  unavailable {}: {}", f.engine, f.reason);
    }
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:>4}  {:<12} {:>6} {:>9}  {:<16} title / url",
        "sem", "classical", "rsv", "distance", "flags"
    );
    for r in &session.results {
        let classical = format!("{}#{}", r.entry.engine, r.entry.classical_rank);
        let _ = writeln!(
            out,
            "{:>4}  {:<12} {:>6.3} {:>9.4}  {:<16} {}",
            r.semantic_rank,
            classical,
            r.rsv,
            r.distance,
            flag_marks(&r.flags),
            clip(&r.entry.title, 60)
        );
        let _ = writeln!(out, "{:>58}{}", "", r.entry.url);
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "{:<8} {:>6} {:>9} {:>7} {:>5} {:>10} {:>9}", "engine", "score", "footrule", "results", "dead", "redundant", "parasite");
    for s in &session.engine_scores {
        let c = session.criteria.for_engine(s.engine);
        let _ = writeln!(
            out,
            "{:<8} {:>6.2} {:>9} {:>7} {:>5} {:>10} {:>9}",
            s.engine.to_string(),
            s.score,
            format!("{}/{}", s.footrule, s.footrule_max),
            c.map_or(0, |c| c.results),
            c.map_or(0, |c| c.dead_links),
            c.map_or(0, |c| c.redundant),
            c.map_or(0, |c| c.parasites),
        );
    }
    out
}
