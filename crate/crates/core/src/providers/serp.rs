//! Data-driven SERP extraction.
//!
//! Each engine has a JSON rules file naming CSS selectors for the result
//! block, its title, link and abstract, plus containers to ignore (ads,
//! "people also ask", related searches). Markup drift is a rules change.

use std::collections::HashSet;
use std::path::Path;

use scraper::{ElementRef, Html, Selector};
use serde::{Deserialize, Serialize};
use url::Url;

use super::{Engine, ProviderError};
use crate::content::decode_html;

const GOOGLE_RULES: &str = include_str!("../../data/rules/google.json");
const BING_RULES: &str = include_str!("../../data/rules/bing.json");
const YAHOO_RULES: &str = include_str!("../../data/rules/yahoo.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionRules {
    /// Base for resolving relative result links.
    pub base_url: String,
    /// Live search URL template with `{query}` and `{n}` placeholders.
    #[serde(default)]
    pub search_url: Option<String>,
    pub result_block_selector: String,
    pub title_selector: String,
    pub url_selector: String,
    #[serde(default = "default_url_attribute")]
    pub url_attribute: String,
    pub abstract_selector: String,
    #[serde(default)]
    pub exclude_selectors: Vec<String>,
}

fn default_url_attribute() -> String {
    "href".into()
}

/// One extracted result: the (title, abstract, URL) triplet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerpHit {
    pub title: String,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
    pub url: String,
}

fn selector(engine: Engine, css: &str) -> Result<Selector, ProviderError> {
    Selector::parse(css).map_err(|e| ProviderError::InvalidRules {
        engine,
        reason: format!("bad selector `{css}`: {e}"),
    })
}

fn text_of(el: ElementRef<'_>) -> String {
    el.text().flat_map(str::split_whitespace).collect::<Vec<_>>().join(" ")
}

impl ExtractionRules {
    /// Rules shipped with the crate. There are none for the offline engine.
    pub fn builtin(engine: Engine) -> Option<ExtractionRules> {
        let json = match engine {
            Engine::Google => GOOGLE_RULES,
            Engine::Bing => BING_RULES,
            Engine::Yahoo => YAHOO_RULES,
            Engine::Offline => return None,
        };
        Some(serde_json::from_str(json).expect("built-in rules are valid JSON"))
    }

    /// Loads `<dir>/<engine>.json`, falling back to the built-in rules when absent.
    pub fn load(engine: Engine, dir: Option<&Path>) -> Result<ExtractionRules, ProviderError> {
        let invalid = |reason: String| ProviderError::InvalidRules { engine, reason };
        if let Some(dir) = dir {
            let path = dir.join(format!("{}.json", engine.name()));
            if path.exists() {
                let text = std::fs::read_to_string(&path).map_err(|e| invalid(e.to_string()))?;
                let rules: ExtractionRules =
                    serde_json::from_str(&text).map_err(|e| invalid(e.to_string()))?;
                rules.check(engine)?;
                return Ok(rules);
            }
        }
        ExtractionRules::builtin(engine).ok_or_else(|| invalid("no built-in rules".into()))
    }

    fn check(&self, engine: Engine) -> Result<(), ProviderError> {
        for css in self.all_selectors() {
            selector(engine, css)?;
        }
        Url::parse(&self.base_url).map_err(|e| ProviderError::InvalidRules {
            engine,
            reason: format!("bad base_url: {e}"),
        })?;
        Ok(())
    }

    fn all_selectors(&self) -> impl Iterator<Item = &str> {
        [
            self.result_block_selector.as_str(),
            self.title_selector.as_str(),
            self.url_selector.as_str(),
            self.abstract_selector.as_str(),
        ]
        .into_iter()
        .chain(self.exclude_selectors.iter().map(String::as_str))
    }

    pub fn search_url(&self, query: &str, n: usize) -> Option<String> {
        let encoded: String = url::form_urlencoded::byte_serialize(query.as_bytes()).collect();
        self.search_url
            .as_ref()
            .map(|t| t.replace("{query}", &encoded).replace("{n}", &n.to_string()))
    }

    /// Extracts results in page order.
    pub fn parse_serp(&self, engine: Engine, html: &[u8]) -> Result<Vec<SerpHit>, ProviderError> {
        if html.iter().all(u8::is_ascii_whitespace) {
            return Err(ProviderError::ParseFailure { engine });
        }
        let block_sel = selector(engine, &self.result_block_selector)?;
        let title_sel = selector(engine, &self.title_selector)?;
        let url_sel = selector(engine, &self.url_selector)?;
        let abstract_sel = selector(engine, &self.abstract_selector)?;
        let base = Url::parse(&self.base_url).map_err(|e| ProviderError::InvalidRules {
            engine,
            reason: format!("bad base_url: {e}"),
        })?;

        let doc = Html::parse_document(&decode_html(html, None));
        let mut excluded = HashSet::new();
        for css in &self.exclude_selectors {
            excluded.extend(doc.select(&selector(engine, css)?).map(|e| e.id()));
        }
        let blocks: Vec<ElementRef<'_>> = doc.select(&block_sel).collect();
        let block_ids: HashSet<_> = blocks.iter().map(|b| b.id()).collect();

        let mut hits = Vec::new();
        for block in blocks {
            let mut lineage = std::iter::once(*block).chain(block.ancestors());
            if lineage.any(|n| excluded.contains(&n.id())) {
                continue;
            }
            // Nested blocks are reported once, by the outermost one.
            if block.ancestors().any(|n| block_ids.contains(&n.id())) {
                continue;
            }
            let Some(title) = block.select(&title_sel).next().map(text_of) else {
                continue;
            };
            let Some(href) = block
                .select(&url_sel)
                .find_map(|a| a.value().attr(&self.url_attribute))
            else {
                continue;
            };
            let Some(url) = resolve_result_url(&base, href) else {
                continue;
            };
            if title.is_empty() {
                continue;
            }
            let abstract_text = block.select(&abstract_sel).next().map(text_of).unwrap_or_default();
            hits.push(SerpHit {
                title,
                abstract_text,
                url,
            });
        }
        if hits.is_empty() {
            return Err(ProviderError::ParseFailure { engine });
        }
        Ok(hits)
    }
}

/// Extracts results from a raw SERP page with the built-in rules for `engine`.
pub fn parse_serp(engine: Engine, html: &[u8]) -> Result<Vec<SerpHit>, ProviderError> {
    let rules = ExtractionRules::builtin(engine).ok_or(ProviderError::InvalidRules {
        engine,
        reason: "no built-in rules".into(),
    })?;
    rules.parse_serp(engine, html)
}

/// Resolves a result link against the engine base and unwraps the engine's
/// click-tracking redirect (`/url?q=` on Google, `/RU=` on Yahoo).
fn resolve_result_url(base: &Url, href: &str) -> Option<String> {
    let href = href.trim();
    if href.is_empty() || href.starts_with('#') {
        return None;
    }
    let url = base.join(href).ok()?;
    let url = unwrap_redirect(&url).unwrap_or(url);
    matches!(url.scheme(), "http" | "https").then(|| url.to_string())
}

fn unwrap_redirect(url: &Url) -> Option<Url> {
    if url.path() == "/url" {
        let target = url
            .query_pairs()
            .find(|(k, _)| k == "q" || k == "url")
            .map(|(_, v)| v.into_owned())?;
        return Url::parse(&target).ok();
    }
    let path = url.path();
    let start = path.find("/RU=")? + 4;
    let encoded = &path[start..];
    let encoded = encoded.split("/RK=").next()?;
    let decoded = percent_decode(encoded);
    Url::parse(&decoded).ok()
}

fn percent_decode(s: &str) -> String {
    url::form_urlencoded::parse(format!("x={s}").as_bytes())
        .next()
        .map(|(_, v)| v.into_owned())
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_rules_parse() {
        for e in Engine::WEB {
            let rules = ExtractionRules::builtin(e).unwrap();
            rules.check(e).unwrap();
            assert!(rules.search_url("red fox", 20).unwrap().contains("red+fox"));
        }
        assert!(ExtractionRules::builtin(Engine::Offline).is_none());
    }

    #[test]
    fn empty_page_is_parse_failure() {
        assert!(matches!(
            parse_serp(Engine::Google, b""),
            Err(ProviderError::ParseFailure { engine: Engine::Google })
        ));
        assert!(matches!(
            parse_serp(Engine::Bing, b"<html><body>no results</body></html>"),
            Err(ProviderError::ParseFailure { .. })
        ));
    }

    #[test]
    fn relative_and_redirect_links_resolve() {
        let base = Url::parse("https://www.google.com/").unwrap();
        assert_eq!(
            resolve_result_url(&base, "/url?q=https://example.org/a%3Fb&sa=U").as_deref(),
            Some("https://example.org/a?b")
        );
        assert_eq!(
            resolve_result_url(&base, "/search?q=more").as_deref(),
            Some("https://www.google.com/search?q=more")
        );
        assert_eq!(resolve_result_url(&base, "javascript:void(0)"), None);
        assert_eq!(resolve_result_url(&base, "#"), None);
        let yahoo = Url::parse("https://search.yahoo.com/").unwrap();
        assert_eq!(
            resolve_result_url(
                &yahoo,
                "https://r.search.yahoo.com/_ylt=A/RV=2/RE=1/RO=10/RU=https%3a%2f%2fexample.org%2fdogs%2f/RK=2/RS=x-"
            )
            .as_deref(),
            Some("https://example.org/dogs/")
        );
    }

    #[test]
    fn excluded_and_nested_blocks_are_skipped() {
        let html = br#"<html><body>
            <div id="tads"><div class="g"><a href="https://ad.example/"><h3>Ad</h3></a></div></div>
            <div class="g"><a href="https://one.example/"><h3>One</h3></a><div class="VwiC3b">first  hit</div>
               <div class="g"><a href="https://inner.example/"><h3>Inner</h3></a></div></div>
            <div class="g"><a href="https://two.example/"><h3> Two </h3></a></div>
            <div class="g"><span>no link here</span><h3>Three</h3></div>
        </body></html>"#;
        let hits = parse_serp(Engine::Google, html).unwrap();
        let urls: Vec<_> = hits.iter().map(|h| h.url.as_str()).collect();
        assert_eq!(urls, vec!["https://one.example/", "https://two.example/"]);
        assert_eq!(hits[0].abstract_text, "first hit");
        assert_eq!(hits[1].title, "Two");
        assert_eq!(hits[1].abstract_text, "");
    }
}
