//! Projection of a query onto WordNet concepts.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::{base_form, Pos, WordNetDb, WordNetError};
use crate::content::{query_tokens, Stopwords};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExpansionConfig {
    pub pos_set: Vec<Pos>,
    pub hypernym_depth: usize,
    pub max_synonyms_per_term: usize,
    pub max_hypernyms_per_term: usize,
}

impl Default for ExpansionConfig {
    fn default() -> Self {
        ExpansionConfig {
            pos_set: vec![Pos::Noun],
            hypernym_depth: 1,
            max_synonyms_per_term: 10,
            max_hypernyms_per_term: 10,
        }
    }
}

/// One query term with the concepts it was projected onto.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermExpansion {
    pub term: String,
    pub synonyms: BTreeSet<String>,
    pub hypernyms: BTreeSet<String>,
}

impl TermExpansion {
    pub fn bare(term: impl Into<String>) -> Self {
        TermExpansion {
            term: term.into(),
            synonyms: BTreeSet::new(),
            hypernyms: BTreeSet::new(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemanticVector {
    pub entries: Vec<TermExpansion>,
}

impl SemanticVector {
    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.term.as_str())
    }
}

fn push_unique(out: &mut Vec<String>, seen: &mut HashSet<String>, item: String) {
    if seen.insert(item.clone()) {
        out.push(item);
    }
}

/// Expands every content term of `query` with its synonyms and hypernyms.
///
/// Expansion unions over all senses of a term; the caps in `config` keep the
/// first lemmas in WordNet sense order. A term found only through morphological
/// detachment (`dogs` -> `dog`) gets its base lemma as a synonym. Terms unknown
/// to WordNet still produce an entry, with empty sets.
pub fn expand_query(
    db: &WordNetDb,
    query: &str,
    config: &ExpansionConfig,
    stopwords: &Stopwords,
) -> Result<SemanticVector, WordNetError> {
    let tokens = query_tokens(query, stopwords);
    if tokens.is_empty() {
        return Err(WordNetError::EmptyQuery);
    }

    let in_wordnet = |lemma: &str| config.pos_set.iter().any(|&p| db.contains_lemma(lemma, p));

    // Greedy left-to-right collocation joining.
    let mut terms: Vec<String> = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        if i + 1 < tokens.len() && tokens[i + 1].follows_previous {
            let joined = format!("{}_{}", tokens[i].text, tokens[i + 1].text);
            if in_wordnet(&joined) {
                terms.push(joined);
                i += 2;
                continue;
            }
        }
        terms.push(tokens[i].text.clone());
        i += 1;
    }

    let mut seen_terms = HashSet::new();
    let entries = terms
        .into_iter()
        .filter(|t| seen_terms.insert(t.clone()))
        .map(|term| expand_term(db, term, config))
        .collect();
    Ok(SemanticVector { entries })
}

fn expand_term(db: &WordNetDb, term: String, config: &ExpansionConfig) -> TermExpansion {
    let mut synonyms = Vec::new();
    let mut seen = HashSet::from([term.clone()]);
    let mut lemmas = Vec::new();
    for &pos in &config.pos_set {
        let Some(lemma) = base_form(db, &term, pos) else {
            continue;
        };
        if lemma != term {
            push_unique(&mut synonyms, &mut seen, lemma.clone());
        }
        for s in db.synonyms_ordered(&lemma, pos) {
            push_unique(&mut synonyms, &mut seen, s);
        }
        lemmas.push((lemma, pos));
    }
    synonyms.truncate(config.max_synonyms_per_term);

    let mut hypernyms = Vec::new();
    let mut seen: HashSet<String> = synonyms.iter().cloned().collect();
    seen.insert(term.clone());
    if config.hypernym_depth > 0 {
        for (lemma, pos) in &lemmas {
            for h in db.hypernyms_ordered(lemma, *pos, config.hypernym_depth) {
                push_unique(&mut hypernyms, &mut seen, h);
            }
        }
    }
    hypernyms.truncate(config.max_hypernyms_per_term);

    TermExpansion {
        term,
        synonyms: synonyms.into_iter().collect(),
        hypernyms: hypernyms.into_iter().collect(),
    }
}
