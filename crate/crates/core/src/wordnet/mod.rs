//! In-memory WordNet 3.0 lexical store.
//!
//! The store is built once from the eight WNDB files (`index.*` and `data.*`)
//! and is immutable afterwards, so a single [`WordNetDb`] can be shared across
//! threads behind an `Arc` without any locking.
//!
//! Lookups take lemmas in WordNet's normalized form: lowercase, with internal
//! spaces replaced by underscores (`ice_cream`).

mod expand;
mod morph;
mod parse;

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use expand::{expand_query, ExpansionConfig, SemanticVector, TermExpansion};
pub use morph::base_form;
pub use parse::{parse_wndb, WNDB_FILES};

/// Environment variable naming the directory that holds the WNDB files.
pub const WORDNET_DIR_ENV: &str = "SEMRANK_WORDNET_DIR";

/// Pointer symbol for a hypernym link.
pub const HYPERNYM: &str = "@";
/// Pointer symbol for an instance hypernym link.
pub const INSTANCE_HYPERNYM: &str = "@i";
/// Pointer symbol for the adjective similar-to link.
pub const SIMILAR_TO: &str = "&";

#[derive(Debug, thiserror::Error)]
pub enum WordNetError {
    #[error("malformed line {line_no} in {file}: {reason}")]
    MalformedLine {
        file: String,
        line_no: usize,
        reason: String,
    },
    #[error("pointer target {offset:08} ({pos}) does not exist")]
    DanglingPointer { offset: u32, pos: Pos },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("query is empty after normalization")]
    EmptyQuery,
}

/// Part of speech. Adjective satellites (`s`) are folded into [`Pos::Adjective`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pos {
    Noun,
    Verb,
    Adjective,
    Adverb,
}

impl Pos {
    pub const ALL: [Pos; 4] = [Pos::Noun, Pos::Verb, Pos::Adjective, Pos::Adverb];

    /// Suffix used by the WNDB file names (`index.noun`, `data.adj`, ...).
    pub fn file_suffix(self) -> &'static str {
        match self {
            Pos::Noun => "noun",
            Pos::Verb => "verb",
            Pos::Adjective => "adj",
            Pos::Adverb => "adv",
        }
    }

    /// Parses the one-letter code used inside WNDB lines.
    pub fn from_code(code: &str) -> Option<Pos> {
        match code {
            "n" => Some(Pos::Noun),
            "v" => Some(Pos::Verb),
            "a" | "s" => Some(Pos::Adjective),
            "r" => Some(Pos::Adverb),
            _ => None,
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pos::Noun => "noun",
            Pos::Verb => "verb",
            Pos::Adjective => "adjective",
            Pos::Adverb => "adverb",
        })
    }
}

impl FromStr for Pos {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "noun" | "n" => Ok(Pos::Noun),
            "verb" | "v" => Ok(Pos::Verb),
            "adjective" | "adj" | "a" => Ok(Pos::Adjective),
            "adverb" | "adv" | "r" => Ok(Pos::Adverb),
            other => Err(format!("unknown part of speech `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pointer {
    pub symbol: String,
    pub target_offset: u32,
    pub target_pos: Pos,
}

/// One WordNet concept.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Synset {
    pub offset: u32,
    pub pos: Pos,
    pub lemmas: Vec<String>,
    pub gloss: String,
    pub pointers: Vec<Pointer>,
}

impl Synset {
    pub fn pointers_with<'a>(&'a self, symbols: &'a [&'a str]) -> impl Iterator<Item = &'a Pointer> {
        self.pointers
            .iter()
            .filter(move |p| symbols.contains(&p.symbol.as_str()))
    }
}

/// Words, synsets and word-sense pairs for one part of speech.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosStats {
    /// Distinct lemmas in the index file.
    pub words: usize,
    /// Synsets in the data file.
    pub synsets: usize,
    /// Word-sense pairs, i.e. (lemma, synset) memberships.
    pub pairs: usize,
}

impl std::ops::Add for PosStats {
    type Output = PosStats;

    fn add(self, rhs: PosStats) -> PosStats {
        PosStats {
            words: self.words + rhs.words,
            synsets: self.synsets + rhs.synsets,
            pairs: self.pairs + rhs.pairs,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordNetStats {
    pub per_pos: BTreeMap<Pos, PosStats>,
}

impl WordNetStats {
    pub fn get(&self, pos: Pos) -> PosStats {
        self.per_pos.get(&pos).copied().unwrap_or_default()
    }

    pub fn total(&self) -> PosStats {
        self.per_pos.values().fold(PosStats::default(), |acc, s| acc + *s)
    }
}

#[derive(Debug, Default)]
pub(crate) struct PosTable {
    pub(crate) synsets: HashMap<u32, Synset>,
    pub(crate) index: HashMap<String, Vec<u32>>,
}

/// Parsed, fully linked WordNet database.
#[derive(Debug, Default)]
pub struct WordNetDb {
    tables: [PosTable; 4],
    stats: WordNetStats,
}

impl WordNetDb {
    /// Loads the eight WNDB files from `dir`.
    pub fn load_dir(dir: impl Into<PathBuf>) -> Result<WordNetDb, WordNetError> {
        parse::load_dir(&dir.into())
    }

    pub fn stats(&self) -> &WordNetStats {
        &self.stats
    }

    pub fn synset(&self, pos: Pos, offset: u32) -> Option<&Synset> {
        self.tables[pos.slot()].synsets.get(&offset)
    }

    pub fn synsets(&self, pos: Pos) -> impl Iterator<Item = &Synset> {
        self.tables[pos.slot()].synsets.values()
    }

    pub fn synset_count(&self) -> usize {
        self.tables.iter().map(|t| t.synsets.len()).sum()
    }

    pub fn contains_lemma(&self, lemma: &str, pos: Pos) -> bool {
        self.tables[pos.slot()].index.contains_key(lemma)
    }

    /// Iterates over every `(lemma, pos)` key of the lemma index.
    pub fn lemmas(&self) -> impl Iterator<Item = (&str, Pos)> {
        Pos::ALL.into_iter().flat_map(move |pos| {
            self.tables[pos.slot()]
                .index
                .keys()
                .map(move |lemma| (lemma.as_str(), pos))
        })
    }

    /// Synsets containing `lemma`, in WordNet sense order. Absent lemmas yield an empty list.
    pub fn lookup_synsets(&self, lemma: &str, pos: Pos) -> Vec<&Synset> {
        let table = &self.tables[pos.slot()];
        table
            .index
            .get(lemma)
            .map(|offsets| offsets.iter().filter_map(|o| table.synsets.get(o)).collect())
            .unwrap_or_default()
    }

    /// Co-lemmas of `lemma` over all of its senses, in sense order, without `lemma` itself.
    pub fn synonyms_ordered(&self, lemma: &str, pos: Pos) -> Vec<String> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for synset in self.lookup_synsets(lemma, pos) {
            for l in &synset.lemmas {
                if l != lemma && seen.insert(l.as_str()) {
                    out.push(l.clone());
                }
            }
        }
        out
    }

    pub fn synonyms_of(&self, lemma: &str, pos: Pos) -> std::collections::BTreeSet<String> {
        self.synonyms_ordered(lemma, pos).into_iter().collect()
    }

    /// Lemmas of the synsets reachable within `depth` generalization hops, in
    /// breadth-first order.
    ///
    /// Nouns and verbs follow `@`/`@i`; adjectives follow the similar-to
    /// relation `&` because adjective clusters have no hypernym links.
    pub fn hypernyms_ordered(&self, lemma: &str, pos: Pos, depth: usize) -> Vec<String> {
        let symbols: &[&str] = match pos {
            Pos::Adjective => &[SIMILAR_TO],
            _ => &[HYPERNYM, INSTANCE_HYPERNYM],
        };
        let start = self.lookup_synsets(lemma, pos);
        let mut visited: HashSet<(Pos, u32)> = start.iter().map(|s| (s.pos, s.offset)).collect();
        let mut queue: VecDeque<(&Synset, usize)> = start.into_iter().map(|s| (s, 0)).collect();
        let mut seen = HashSet::new();
        let mut out = Vec::new();

        while let Some((synset, level)) = queue.pop_front() {
            if level == depth {
                continue;
            }
            for ptr in synset.pointers_with(symbols) {
                if !visited.insert((ptr.target_pos, ptr.target_offset)) {
                    continue;
                }
                let Some(target) = self.synset(ptr.target_pos, ptr.target_offset) else {
                    continue;
                };
                for l in &target.lemmas {
                    if l != lemma && seen.insert(l.clone()) {
                        out.push(l.clone());
                    }
                }
                queue.push_back((target, level + 1));
            }
        }
        out
    }

    pub fn hypernyms_of(
        &self,
        lemma: &str,
        pos: Pos,
        depth: usize,
    ) -> std::collections::BTreeSet<String> {
        self.hypernyms_ordered(lemma, pos, depth).into_iter().collect()
    }
}

#[cfg(test)]
pub(crate) mod fixture {
    use super::*;

    /// A tiny hand-written WNDB database:
    ///
    /// * noun 00000100 `dog, domestic_dog` with `@` -> 00000200
    /// * noun 00000200 `canine, canid` with `@` -> 00000300, `~` -> 00000100
    /// * noun 00000300 `carnivore` with `~` -> 00000200
    /// * noun 00000400 `ice_cream, icecream`
    /// * noun 00000500 `frump, dog` (second sense of dog)
    /// * verb 00000100 `dog, chase` with `@` -> 00000200
    /// * verb 00000200 `pursue, follow`
    /// * adj  00000100 `big, large` with `&` -> 00000200
    /// * adj  00000200 `huge(a), immense`
    pub const INDEX_NOUN: &str = "  1 This is a fixture license header line\n  2 second header line\ncanid n 1 1 @ 1 0 00000200  \ncanine n 1 2 @ ~ 1 0 00000200  \ncarnivore n 1 1 ~ 1 0 00000300  \ndog n 2 1 @ 2 1 00000100 00000500  \ndomestic_dog n 1 1 @ 1 0 00000100  \nfrump n 1 0 1 0 00000500  \nice_cream n 1 0 1 0 00000400  \nicecream n 1 0 1 0 00000400  \n";
    pub const DATA_NOUN: &str = "  1 This is a fixture license header line\n00000100 05 n 02 dog 0 domestic_dog 0 001 @ 00000200 n 0000 | a member of the genus Canis\n00000200 05 n 02 canine 0 canid 0 002 @ 00000300 n 0000 ~ 00000100 n 0000 | any of various fissiped mammals\n00000300 05 n 01 carnivore 0 001 ~ 00000200 n 0000 | a terrestrial or aquatic flesh-eating mammal\n00000400 13 n 02 ice_cream 0 icecream 0 000 | frozen dessert\n00000500 18 n 02 frump 0 dog 1 000 | a dull unattractive unpleasant girl or woman\n";
    pub const INDEX_VERB: &str = "chase v 1 1 @ 1 0 00000100  \ndog v 1 1 @ 1 0 00000100  \nfollow v 1 0 1 0 00000200  \npursue v 1 0 1 0 00000200  \n";
    pub const DATA_VERB: &str = "00000100 38 v 02 dog 0 chase 0 001 @ 00000200 v 0000 01 + 01 00 | go after with the intent to catch\n00000200 38 v 02 pursue 0 follow 0 000 01 + 01 00 | follow in or as if in pursuit\n";
    pub const INDEX_ADJ: &str = "big a 1 1 & 1 0 00000100  \nhuge a 1 0 1 0 00000200  \nimmense a 1 0 1 0 00000200  \nlarge a 1 1 & 1 0 00000100  \n";
    pub const DATA_ADJ: &str = "00000100 00 a 02 big 0 large 0 001 & 00000200 s 0000 | above average in size\n00000200 00 s 02 huge(a) 0 immense 0 001 & 00000100 a 0000 | unusually great in size\n";

    pub fn db() -> WordNetDb {
        let index = vec![
            (Pos::Noun, INDEX_NOUN.as_bytes()),
            (Pos::Verb, INDEX_VERB.as_bytes()),
            (Pos::Adjective, INDEX_ADJ.as_bytes()),
            (Pos::Adverb, b"".as_slice()),
        ];
        let data = vec![
            (Pos::Noun, DATA_NOUN.as_bytes()),
            (Pos::Verb, DATA_VERB.as_bytes()),
            (Pos::Adjective, DATA_ADJ.as_bytes()),
            (Pos::Adverb, b"".as_slice()),
        ];
        parse_wndb(index, data).expect("fixture parses")
    }
}
