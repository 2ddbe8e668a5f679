use super::{Pos, WordNetDb};

// WordNet's detachment rules (morphy), without the exception lists.
const NOUN_RULES: &[(&str, &str)] = &[
    ("s", ""),
    ("ses", "s"),
    ("xes", "x"),
    ("zes", "z"),
    ("ches", "ch"),
    ("shes", "sh"),
    ("men", "man"),
    ("ies", "y"),
];
const VERB_RULES: &[(&str, &str)] = &[
    ("s", ""),
    ("ies", "y"),
    ("es", "e"),
    ("es", ""),
    ("ed", "e"),
    ("ed", ""),
    ("ing", "e"),
    ("ing", ""),
];
const ADJ_RULES: &[(&str, &str)] = &[("er", ""), ("est", ""), ("er", "e"), ("est", "e")];

fn rules(pos: Pos) -> &'static [(&'static str, &'static str)] {
    match pos {
        Pos::Noun => NOUN_RULES,
        Pos::Verb => VERB_RULES,
        Pos::Adjective => ADJ_RULES,
        Pos::Adverb => &[],
    }
}

/// Returns the index lemma for `word`: the word itself when indexed, otherwise
/// the first detachment-rule candidate that is.
pub fn base_form(db: &WordNetDb, word: &str, pos: Pos) -> Option<String> {
    if db.contains_lemma(word, pos) {
        return Some(word.to_string());
    }
    rules(pos).iter().find_map(|(suffix, replacement)| {
        let stem = word.strip_suffix(suffix)?;
        if stem.is_empty() {
            return None;
        }
        let candidate = format!("{stem}{replacement}");
        db.contains_lemma(&candidate, pos).then_some(candidate)
    })
}

#[cfg(test)]
mod tests {
    use super::super::fixture;
    use super::*;

    #[test]
    fn detaches_plural_and_inflection() {
        let db = fixture::db();
        assert_eq!(base_form(&db, "dog", Pos::Noun).as_deref(), Some("dog"));
        assert_eq!(base_form(&db, "dogs", Pos::Noun).as_deref(), Some("dog"));
        assert_eq!(base_form(&db, "canines", Pos::Noun).as_deref(), Some("canine"));
        assert_eq!(base_form(&db, "dogged", Pos::Verb), None);
        assert_eq!(base_form(&db, "chased", Pos::Verb).as_deref(), Some("chase"));
        assert_eq!(base_form(&db, "chasing", Pos::Verb).as_deref(), Some("chase"));
        assert_eq!(base_form(&db, "bigger", Pos::Adjective), None);
        assert_eq!(base_form(&db, "larger", Pos::Adjective).as_deref(), Some("large"));
        assert_eq!(base_form(&db, "s", Pos::Noun), None);
    }
}
