//! WNDB 3.0 line grammar.
//!
//! ```text
//! index: lemma pos synset_cnt p_cnt [ptr_symbol...] sense_cnt tagsense_cnt synset_offset...
//! data:  synset_offset lex_filenum ss_type w_cnt word lex_id [word lex_id...] p_cnt [ptr...] [frames...] | gloss
//! ```
//!
//! Lines that begin with two spaces are license header lines and are skipped.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use super::{Pointer, Pos, PosStats, PosTable, Synset, WordNetDb, WordNetError, WordNetStats};

/// The eight WNDB files read by [`WordNetDb::load_dir`].
pub const WNDB_FILES: [&str; 8] = [
    "index.noun",
    "index.verb",
    "index.adj",
    "index.adv",
    "data.noun",
    "data.verb",
    "data.adj",
    "data.adv",
];

pub(super) fn load_dir(dir: &Path) -> Result<WordNetDb, WordNetError> {
    let open = |name: String| {
        let path = dir.join(&name);
        File::open(&path)
            .map(BufReader::new)
            .map_err(|source| WordNetError::Io { path, source })
    };
    let mut index = Vec::with_capacity(4);
    let mut data = Vec::with_capacity(4);
    for pos in Pos::ALL {
        index.push((pos, open(format!("index.{}", pos.file_suffix()))?));
        data.push((pos, open(format!("data.{}", pos.file_suffix()))?));
    }
    parse_wndb(index, data)
}

/// Parses per-part-of-speech index and data streams into a linked database.
///
/// Every pointer and every index offset is checked against the parsed synsets
/// once all streams are consumed.
pub fn parse_wndb<I, D>(
    index: impl IntoIterator<Item = (Pos, I)>,
    data: impl IntoIterator<Item = (Pos, D)>,
) -> Result<WordNetDb, WordNetError>
where
    I: BufRead,
    D: BufRead,
{
    let mut db = WordNetDb::default();
    let mut stats: HashMap<Pos, PosStats> = HashMap::new();

    for (pos, reader) in data {
        let file = format!("data.{}", pos.file_suffix());
        let table = &mut db.tables[pos.slot()];
        for_each_line(reader, &file, |line_no, line| {
            let synset = parse_data_line(line).map_err(|reason| WordNetError::MalformedLine {
                file: file.clone(),
                line_no,
                reason,
            })?;
            if synset.pos != pos {
                return Err(WordNetError::MalformedLine {
                    file: file.clone(),
                    line_no,
                    reason: format!("synset type {} in {} file", synset.pos, pos),
                });
            }
            if table.synsets.insert(synset.offset, synset).is_some() {
                return Err(WordNetError::MalformedLine {
                    file: file.clone(),
                    line_no,
                    reason: "duplicate synset offset".into(),
                });
            }
            stats.entry(pos).or_default().synsets += 1;
            Ok(())
        })?;
    }

    for (pos, reader) in index {
        let file = format!("index.{}", pos.file_suffix());
        let table = &mut db.tables[pos.slot()];
        for_each_line(reader, &file, |line_no, line| {
            let (lemma, offsets) =
                parse_index_line(line, pos).map_err(|reason| WordNetError::MalformedLine {
                    file: file.clone(),
                    line_no,
                    reason,
                })?;
            let entry = stats.entry(pos).or_default();
            entry.words += 1;
            entry.pairs += offsets.len();
            table.index.insert(lemma, offsets);
            Ok(())
        })?;
    }

    check_closure(&db)?;
    db.stats = WordNetStats {
        per_pos: stats.into_iter().collect(),
    };
    Ok(db)
}

fn for_each_line<R: BufRead>(
    mut reader: R,
    file: &str,
    mut f: impl FnMut(usize, &str) -> Result<(), WordNetError>,
) -> Result<(), WordNetError> {
    let mut buf = String::new();
    let mut line_no = 0;
    loop {
        buf.clear();
        let n = reader.read_line(&mut buf).map_err(|source| WordNetError::Io {
            path: file.into(),
            source,
        })?;
        if n == 0 {
            return Ok(());
        }
        line_no += 1;
        if buf.starts_with("  ") {
            continue;
        }
        let line = buf.trim_end_matches(['\n', '\r']);
        if line.trim().is_empty() {
            continue;
        }
        f(line_no, line)?;
    }
}

fn field<'a>(it: &mut impl Iterator<Item = &'a str>, what: &str) -> Result<&'a str, String> {
    it.next().ok_or_else(|| format!("missing {what}"))
}

fn number(s: &str, radix: u32, what: &str) -> Result<u32, String> {
    u32::from_str_radix(s, radix).map_err(|_| format!("bad {what} `{s}`"))
}

fn offset(s: &str) -> Result<u32, String> {
    if s.len() != 8 || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("bad synset offset `{s}`"));
    }
    number(s, 10, "synset offset")
}

fn parse_index_line(line: &str, file_pos: Pos) -> Result<(String, Vec<u32>), String> {
    let mut it = line.split_ascii_whitespace();
    let lemma = field(&mut it, "lemma")?;
    let pos = field(&mut it, "pos")?;
    if Pos::from_code(pos) != Some(file_pos) {
        return Err(format!("pos `{pos}` does not match {file_pos} index"));
    }
    let synset_cnt = number(field(&mut it, "synset_cnt")?, 10, "synset_cnt")? as usize;
    let p_cnt = number(field(&mut it, "p_cnt")?, 10, "p_cnt")? as usize;
    for _ in 0..p_cnt {
        field(&mut it, "ptr_symbol")?;
    }
    number(field(&mut it, "sense_cnt")?, 10, "sense_cnt")?;
    number(field(&mut it, "tagsense_cnt")?, 10, "tagsense_cnt")?;
    let offsets = it.map(offset).collect::<Result<Vec<_>, _>>()?;
    if offsets.len() != synset_cnt {
        return Err(format!(
            "expected {synset_cnt} synset offsets, found {}",
            offsets.len()
        ));
    }
    Ok((lemma.to_string(), offsets))
}

/// Strips the syntactic marker WordNet appends to some adjectives: `(a)`, `(p)`, `(ip)`.
fn strip_adj_marker(word: &str) -> &str {
    for marker in ["(a)", "(p)", "(ip)"] {
        if let Some(stripped) = word.strip_suffix(marker) {
            return stripped;
        }
    }
    word
}

fn parse_data_line(line: &str) -> Result<Synset, String> {
    let (head, gloss) = match line.split_once(" | ") {
        Some((h, g)) => (h, g.trim_end()),
        None => (line.strip_suffix(" |").unwrap_or(line), ""),
    };
    let mut it = head.split_ascii_whitespace();
    let off = offset(field(&mut it, "synset_offset")?)?;
    number(field(&mut it, "lex_filenum")?, 10, "lex_filenum")?;
    let ss_type = field(&mut it, "ss_type")?;
    let pos = Pos::from_code(ss_type).ok_or_else(|| format!("bad ss_type `{ss_type}`"))?;
    let w_cnt = number(field(&mut it, "w_cnt")?, 16, "w_cnt")?;
    if w_cnt == 0 {
        return Err("synset has no words".into());
    }
    let mut lemmas: Vec<String> = Vec::with_capacity(w_cnt as usize);
    for _ in 0..w_cnt {
        let word = strip_adj_marker(field(&mut it, "word")?).to_lowercase();
        number(field(&mut it, "lex_id")?, 16, "lex_id")?;
        if !lemmas.contains(&word) {
            lemmas.push(word);
        }
    }
    let p_cnt = number(field(&mut it, "p_cnt")?, 10, "p_cnt")?;
    let mut pointers = Vec::with_capacity(p_cnt as usize);
    for _ in 0..p_cnt {
        let symbol = field(&mut it, "pointer_symbol")?.to_string();
        let target_offset = offset(field(&mut it, "pointer offset")?)?;
        let code = field(&mut it, "pointer pos")?;
        let target_pos = Pos::from_code(code).ok_or_else(|| format!("bad pointer pos `{code}`"))?;
        let st = field(&mut it, "source/target")?;
        if st.len() != 4 {
            return Err(format!("bad source/target `{st}`"));
        }
        number(st, 16, "source/target")?;
        pointers.push(Pointer {
            symbol,
            target_offset,
            target_pos,
        });
    }
    // Verb frames follow the pointers; they are not used.
    Ok(Synset {
        offset: off,
        pos,
        lemmas,
        gloss: gloss.to_string(),
        pointers,
    })
}

fn check_closure(db: &WordNetDb) -> Result<(), WordNetError> {
    for pos in Pos::ALL {
        let table: &PosTable = &db.tables[pos.slot()];
        for synset in table.synsets.values() {
            for p in &synset.pointers {
                if db.synset(p.target_pos, p.target_offset).is_none() {
                    return Err(WordNetError::DanglingPointer {
                        offset: p.target_offset,
                        pos: p.target_pos,
                    });
                }
            }
        }
        for offsets in table.index.values() {
            if let Some(&missing) = offsets.iter().find(|o| !table.synsets.contains_key(o)) {
                return Err(WordNetError::DanglingPointer {
                    offset: missing,
                    pos,
                });
            }
        }
    }
    Ok(())
}
