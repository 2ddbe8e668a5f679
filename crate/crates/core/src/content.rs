//! HTML purification and tokenization.
//!
//! Both documents and queries go through the same tokenizer: split on runs of
//! non-alphanumeric characters, lowercase, drop stopwords and tokens shorter
//! than two characters. There is no stemming; WordNet lemma matching takes
//! its place.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;
use std::sync::OnceLock;

use ego_tree::iter::Edge;
use scraper::{Html, Node};
use serde::{Deserialize, Serialize};

const ENGLISH_STOPWORDS: &str = include_str!("../data/stopwords_en.txt");

/// Tokens shorter than this many characters are dropped.
pub const MIN_TOKEN_CHARS: usize = 2;

#[derive(Debug, thiserror::Error)]
pub enum ContentError {
    #[error("no tokens survive normalization")]
    EmptyDocument,
    #[error("cannot read stopword list {path}: {source}")]
    Stopwords {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stopwords(HashSet<String>);

impl Stopwords {
    /// The built-in 318-word English list.
    pub fn english() -> &'static Stopwords {
        static LIST: OnceLock<Stopwords> = OnceLock::new();
        LIST.get_or_init(|| Stopwords::parse(ENGLISH_STOPWORDS))
    }

    /// Parses the stopword file format: one token per line, `#` starts a comment.
    pub fn parse(text: &str) -> Stopwords {
        Stopwords(
            text.lines()
                .map(|l| l.split('#').next().unwrap_or("").trim().to_lowercase())
                .filter(|l| !l.is_empty())
                .collect(),
        )
    }

    pub fn from_file(path: &Path) -> Result<Stopwords, ContentError> {
        std::fs::read_to_string(path)
            .map(|t| Stopwords::parse(&t))
            .map_err(|source| ContentError::Stopwords {
                path: path.to_path_buf(),
                source,
            })
    }

    pub fn contains(&self, token: &str) -> bool {
        self.0.contains(token)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<S: Into<String>> FromIterator<S> for Stopwords {
    fn from_iter<T: IntoIterator<Item = S>>(iter: T) -> Self {
        Stopwords(iter.into_iter().map(Into::into).collect())
    }
}

/// Outcome of fetching a result page.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FetchStatus {
    Ok,
    HttpError { code: u16 },
    Timeout,
    Unreachable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageContent {
    pub url: String,
    pub title: String,
    pub body_text: String,
    /// Characters of `body_text` that sit inside hyperlinks.
    pub anchor_text_len: usize,
    /// Characters of `body_text`.
    pub total_text_len: usize,
    pub fetch_status: FetchStatus,
}

impl PageContent {
    /// An empty page carrying a failed fetch status.
    pub fn failed(url: impl Into<String>, status: FetchStatus) -> Self {
        PageContent {
            url: url.into(),
            title: String::new(),
            body_text: String::new(),
            anchor_text_len: 0,
            total_text_len: 0,
            fetch_status: status,
        }
    }

    /// Text fed to the tokenizer: the title once, then the body.
    pub fn weighting_text(&self) -> String {
        if self.title.is_empty() {
            self.body_text.clone()
        } else {
            format!("{}\n{}", self.title, self.body_text)
        }
    }
}

/// Decodes raw page bytes: declared charset first, then a `<meta charset>`
/// sniff, then strict UTF-8, then Latin-1 (which cannot fail).
pub fn decode_html(raw: &[u8], declared: Option<&str>) -> String {
    let labels = declared
        .map(str::to_string)
        .into_iter()
        .chain(sniff_meta_charset(raw));
    for label in labels {
        if let Some(encoding) = encoding_rs::Encoding::for_label(label.trim().as_bytes()) {
            let (text, _, had_errors) = encoding.decode(raw);
            if !had_errors {
                return text.into_owned();
            }
        }
    }
    let raw = raw.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(raw);
    match std::str::from_utf8(raw) {
        Ok(s) => s.to_string(),
        Err(_) => raw.iter().map(|&b| b as char).collect(),
    }
}

fn sniff_meta_charset(raw: &[u8]) -> Option<String> {
    let head = &raw[..raw.len().min(1024)];
    let lower: Vec<u8> = head.to_ascii_lowercase();
    let pos = lower.windows(8).position(|w| w == b"charset=")?;
    let rest = &lower[pos + 8..];
    let rest = rest.strip_prefix(b"\"").or_else(|| rest.strip_prefix(b"'")).unwrap_or(rest);
    let end = rest
        .iter()
        .position(|b| !(b.is_ascii_alphanumeric() || *b == b'-' || *b == b'_'))
        .unwrap_or(rest.len());
    (end > 0).then(|| String::from_utf8_lossy(&rest[..end]).into_owned())
}

const SKIPPED: &[&str] = &[
    "script", "style", "noscript", "template", "head", "iframe", "object", "svg",
];

const BLOCKS: &[&str] = &[
    "address", "article", "aside", "blockquote", "body", "br", "dd", "div", "dl", "dt",
    "fieldset", "figcaption", "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5", "h6",
    "header", "hr", "html", "li", "main", "nav", "ol", "option", "p", "pre", "section",
    "table", "td", "th", "tr", "ul",
];

/// Collapses whitespace while tracking how much emitted text lies inside links.
#[derive(Default)]
struct TextSink {
    out: String,
    chars: usize,
    anchor_chars: usize,
    pending_space: bool,
    last_in_anchor: bool,
}

impl TextSink {
    fn boundary(&mut self) {
        self.pending_space = true;
    }

    fn push(&mut self, text: &str, in_anchor: bool) {
        for c in text.chars() {
            if c.is_whitespace() {
                self.pending_space = true;
                continue;
            }
            if self.pending_space && !self.out.is_empty() {
                // A separator is anchor text only inside a run of anchor text.
                self.emit(' ', in_anchor && self.last_in_anchor);
            }
            self.pending_space = false;
            self.emit(c, in_anchor);
            self.last_in_anchor = in_anchor;
        }
    }

    fn emit(&mut self, c: char, in_anchor: bool) {
        self.out.push(c);
        self.chars += 1;
        if in_anchor {
            self.anchor_chars += 1;
        }
    }
}

fn collapse(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Defuses a `<` that would read as the start of a tag (`<b`, `</`, `<!`, `<?`).
fn defuse_markup(text: String) -> String {
    if !text.contains('<') {
        return text;
    }
    let mut out = String::with_capacity(text.len() + 8);
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        out.push(c);
        if c == '<' {
            if let Some(&n) = chars.peek() {
                if n.is_ascii_alphabetic() || matches!(n, '/' | '!' | '?') {
                    out.push(' ');
                }
            }
        }
    }
    out
}

/// True when `text` contains something that opens a markup element.
pub fn contains_markup(text: &str) -> bool {
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        if c == '<' {
            if let Some(&n) = chars.peek() {
                if n.is_ascii_alphabetic() || matches!(n, '/' | '!' | '?') {
                    return true;
                }
            }
        }
    }
    false
}

/// Strips an HTML page down to its visible text. Never fails: malformed
/// markup is handled by the error-tolerant HTML5 parser and empty input
/// yields an empty page.
pub fn purify_html(raw: &[u8], base_url: &str) -> PageContent {
    purify_html_with_charset(raw, base_url, None)
}

pub fn purify_html_with_charset(raw: &[u8], base_url: &str, declared: Option<&str>) -> PageContent {
    if raw.is_empty() {
        return PageContent::failed(base_url, FetchStatus::Ok);
    }
    let html = Html::parse_document(&decode_html(raw, declared));

    let mut title = String::new();
    let mut sink = TextSink::default();
    let mut skip_depth = 0usize;
    let mut anchor_depth = 0usize;
    let mut title_depth = 0usize;

    for edge in html.tree.root().traverse() {
        match edge {
            Edge::Open(node) => match node.value() {
                Node::Element(el) => {
                    let name = el.name();
                    if name == "title" {
                        title_depth += 1;
                    }
                    if SKIPPED.contains(&name) {
                        skip_depth += 1;
                    } else if skip_depth == 0 {
                        if name == "a" {
                            anchor_depth += 1;
                        }
                        if BLOCKS.contains(&name) {
                            sink.boundary();
                        }
                    }
                }
                Node::Text(t) => {
                    if title_depth > 0 {
                        if title.is_empty() {
                            title = collapse(t);
                        }
                    } else if skip_depth == 0 {
                        sink.push(t, anchor_depth > 0);
                    }
                }
                _ => {}
            },
            Edge::Close(node) => {
                if let Node::Element(el) = node.value() {
                    let name = el.name();
                    if name == "title" {
                        title_depth = title_depth.saturating_sub(1);
                    }
                    if SKIPPED.contains(&name) {
                        skip_depth = skip_depth.saturating_sub(1);
                    } else if skip_depth == 0 {
                        if name == "a" {
                            anchor_depth = anchor_depth.saturating_sub(1);
                        }
                        if BLOCKS.contains(&name) {
                            sink.boundary();
                        }
                    }
                }
            }
        }
    }

    // Defusing inserts a space after `<`; count it as ordinary text.
    let body_text = defuse_markup(sink.out);
    let total_text_len = body_text.chars().count();
    PageContent {
        url: base_url.to_string(),
        title: defuse_markup(title),
        body_text,
        anchor_text_len: sink.anchor_chars.min(total_text_len),
        total_text_len,
        fetch_status: FetchStatus::Ok,
    }
}

/// Term counts of one document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizedDoc {
    pub doc_id: String,
    pub counts: BTreeMap<String, u32>,
    /// Total number of surviving tokens; equals the sum of `counts`.
    pub card: u32,
    /// Adjacent surviving token pairs joined with `_`, for collocation lemmas.
    /// Not part of `card`.
    pub bigrams: BTreeMap<String, u32>,
}

impl TokenizedDoc {
    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.doc_id = id.into();
        self
    }

    /// Occurrences of `word`; words containing `_` are looked up as bigrams.
    pub fn occ(&self, word: &str) -> u32 {
        let map = if word.contains('_') { &self.bigrams } else { &self.counts };
        map.get(word).copied().unwrap_or(0)
    }
}

fn raw_tokens(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
}

/// Surviving tokens, each marked with whether the token right before it in
/// the text also survived.
fn filtered_tokens<'a>(
    text: &'a str,
    stopwords: &'a Stopwords,
) -> impl Iterator<Item = (String, bool)> + 'a {
    let mut prev_kept = false;
    raw_tokens(text).filter_map(move |tok| {
        let keep = tok.chars().count() >= MIN_TOKEN_CHARS && !stopwords.contains(&tok);
        let follows = prev_kept;
        prev_kept = keep;
        keep.then_some((tok, follows))
    })
}

pub fn tokenize(text: &str, stopwords: &Stopwords) -> Result<TokenizedDoc, ContentError> {
    let mut counts: BTreeMap<String, u32> = BTreeMap::new();
    let mut bigrams: BTreeMap<String, u32> = BTreeMap::new();
    let mut card = 0u32;
    let mut prev: Option<String> = None;
    for (tok, follows) in filtered_tokens(text, stopwords) {
        if follows {
            if let Some(p) = &prev {
                *bigrams.entry(format!("{p}_{tok}")).or_default() += 1;
            }
        }
        *counts.entry(tok.clone()).or_default() += 1;
        card += 1;
        prev = Some(tok);
    }
    if card == 0 {
        return Err(ContentError::EmptyDocument);
    }
    debug_assert_eq!(counts.values().sum::<u32>(), card);
    Ok(TokenizedDoc {
        doc_id: String::new(),
        counts,
        card,
        bigrams,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryToken {
    pub text: String,
    /// The preceding surviving token was adjacent in the original query.
    pub follows_previous: bool,
}

/// Normalized query terms in query order.
pub fn query_tokens(query: &str, stopwords: &Stopwords) -> Vec<QueryToken> {
    filtered_tokens(query, stopwords)
        .map(|(text, follows_previous)| QueryToken {
            text,
            follows_previous,
        })
        .collect()
}
