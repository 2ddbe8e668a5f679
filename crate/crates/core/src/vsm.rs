//! Vector-space scoring over the expanded query axes.
//!
//! Each query term is one axis. A document's weight on an axis is the
//! length-normalized frequency of the term itself plus discounted frequencies
//! of its synonyms (`alpha`) and hypernyms (`beta`). Documents are compared to
//! the query vector with an L1 distance and with the cosine correlation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::content::TokenizedDoc;
use crate::wordnet::{SemanticVector, TermExpansion};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VsmError {
    #[error("dimension mismatch: query has {query} axes, document has {doc}")]
    DimensionMismatch { query: usize, doc: usize },
    #[error("cannot weight a query against an empty result set")]
    EmptyResultSet,
    #[error("invalid weighting config: {0}")]
    InvalidWeighting(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QueryWeighting {
    Idf,
    Uniform,
}

impl FromStr for QueryWeighting {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "idf" => Ok(QueryWeighting::Idf),
            "uniform" => Ok(QueryWeighting::Uniform),
            other => Err(format!("unknown query weighting `{other}` (idf|uniform)")),
        }
    }
}

impl fmt::Display for QueryWeighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QueryWeighting::Idf => "idf",
            QueryWeighting::Uniform => "uniform",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WeightingConfig {
    /// Discount applied to synonym occurrences.
    pub alpha: f64,
    /// Discount applied to hypernym occurrences.
    pub beta: f64,
    pub query_weighting: QueryWeighting,
}

impl Default for WeightingConfig {
    fn default() -> Self {
        WeightingConfig {
            alpha: 0.5,
            beta: 0.25,
            query_weighting: QueryWeighting::Idf,
        }
    }
}

impl WeightingConfig {
    /// Literal-term matching only; expansions contribute nothing.
    pub fn literal() -> Self {
        WeightingConfig {
            alpha: 0.0,
            beta: 0.0,
            ..Default::default()
        }
    }

    /// Enforces `0 <= beta <= alpha <= 1`.
    pub fn validate(&self) -> Result<(), VsmError> {
        let ok = (0.0..=1.0).contains(&self.alpha)
            && (0.0..=1.0).contains(&self.beta)
            && self.beta <= self.alpha;
        if ok {
            Ok(())
        } else {
            Err(VsmError::InvalidWeighting(format!(
                "need 0 <= beta <= alpha <= 1, got alpha={} beta={}",
                self.alpha, self.beta
            )))
        }
    }
}

/// The query axes: one per semantic-vector entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisSet {
    pub axes: Vec<TermExpansion>,
}

impl AxisSet {
    pub fn dimension(&self) -> usize {
        self.axes.len()
    }
}

impl From<&SemanticVector> for AxisSet {
    fn from(sv: &SemanticVector) -> Self {
        AxisSet {
            axes: sv.entries.clone(),
        }
    }
}

/// Per-axis breakdown of a document weight.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AxisContribution {
    pub term_tf: f64,
    pub synonym_tf_sum: f64,
    pub hypernym_tf_sum: f64,
    /// Every axis lemma (term, synonym or hypernym) found in the document, with its tf.
    pub matched: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocVector {
    pub doc_id: String,
    pub weights: Vec<f64>,
    pub contrib: Vec<AxisContribution>,
}

impl DocVector {
    /// The vector given to documents with no usable text.
    pub fn zero(doc_id: impl Into<String>, dimension: usize) -> Self {
        DocVector {
            doc_id: doc_id.into(),
            weights: vec![0.0; dimension],
            contrib: vec![AxisContribution::default(); dimension],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryVector {
    pub weights: Vec<f64>,
}

/// Length-normalized term frequency: `occ(word) / card`.
pub fn tf(doc: &TokenizedDoc, word: &str) -> f64 {
    if doc.card == 0 {
        return 0.0;
    }
    f64::from(doc.occ(word)) / f64::from(doc.card)
}

pub fn build_doc_vector(doc: &TokenizedDoc, axes: &AxisSet, config: &WeightingConfig) -> DocVector {
    let mut weights = Vec::with_capacity(axes.dimension());
    let mut contrib = Vec::with_capacity(axes.dimension());
    for axis in &axes.axes {
        let mut c = AxisContribution::default();
        let mut record = |lemma: &str| {
            let v = tf(doc, lemma);
            if v > 0.0 {
                c.matched.insert(lemma.to_string(), v);
            }
            v
        };
        let term_tf = record(&axis.term);
        let synonym_tf_sum: f64 = axis.synonyms.iter().map(|s| record(s)).sum();
        let hypernym_tf_sum: f64 = axis.hypernyms.iter().map(|h| record(h)).sum();
        c.term_tf = term_tf;
        c.synonym_tf_sum = synonym_tf_sum;
        c.hypernym_tf_sum = hypernym_tf_sum;
        weights.push(term_tf + config.alpha * synonym_tf_sum + config.beta * hypernym_tf_sum);
        contrib.push(c);
    }
    DocVector {
        doc_id: doc.doc_id.clone(),
        weights,
        contrib,
    }
}

/// Query weights over the retrieved set.
///
/// `idf` uses the smoothed `ln((N + 1) / (n_i + 1)) + 1`, where `n_i` counts
/// documents with a positive weight on axis `i`, so every weight is at least 1.
pub fn build_query_vector(
    axes: &AxisSet,
    docs: &[DocVector],
    config: &WeightingConfig,
) -> Result<QueryVector, VsmError> {
    if docs.is_empty() {
        return Err(VsmError::EmptyResultSet);
    }
    let t = axes.dimension();
    if let Some(d) = docs.iter().find(|d| d.weights.len() != t) {
        return Err(VsmError::DimensionMismatch {
            query: t,
            doc: d.weights.len(),
        });
    }
    let weights = match config.query_weighting {
        QueryWeighting::Uniform => vec![1.0; t],
        QueryWeighting::Idf => {
            let n = docs.len() as f64;
            (0..t)
                .map(|i| {
                    let df = docs.iter().filter(|d| d.weights[i] > 0.0).count() as f64;
                    ((n + 1.0) / (df + 1.0)).ln() + 1.0
                })
                .collect()
        }
    };
    Ok(QueryVector { weights })
}

fn check_dims(q: &QueryVector, d: &DocVector) -> Result<(), VsmError> {
    if q.weights.len() == d.weights.len() {
        Ok(())
    } else {
        Err(VsmError::DimensionMismatch {
            query: q.weights.len(),
            doc: d.weights.len(),
        })
    }
}

/// L1 distance between query and document.
pub fn dist(q: &QueryVector, d: &DocVector) -> Result<f64, VsmError> {
    check_dims(q, d)?;
    Ok(q.weights
        .iter()
        .zip(&d.weights)
        .map(|(a, b)| (a - b).abs())
        .sum())
}

/// Cosine correlation between query and document; 0 for a zero document.
pub fn rsv(q: &QueryVector, d: &DocVector) -> Result<f64, VsmError> {
    check_dims(q, d)?;
    let (dot, qq, dd) = q
        .weights
        .iter()
        .zip(&d.weights)
        .fold((0.0, 0.0, 0.0), |(dot, qq, dd), (a, b)| {
            (dot + a * b, qq + a * a, dd + b * b)
        });
    if dd == 0.0 || qq == 0.0 {
        return Ok(0.0);
    }
    Ok((dot / (qq.sqrt() * dd.sqrt())).clamp(0.0, 1.0))
}

/// Rounds to 12 decimal places so ordering is stable across platforms.
pub fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::content::{tokenize, Stopwords};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn doc(pairs: &[(&str, u32)]) -> TokenizedDoc {
        let counts: BTreeMap<String, u32> = pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        TokenizedDoc {
            doc_id: "d".into(),
            card: counts.values().sum(),
            counts,
            bigrams: BTreeMap::new(),
        }
    }

    fn dog_axis() -> AxisSet {
        AxisSet {
            axes: vec![TermExpansion {
                term: "dog".into(),
                synonyms: BTreeSet::from(["domestic_dog".to_string()]),
                hypernyms: BTreeSet::from(["canine".to_string()]),
            }],
        }
    }

    fn qv(w: &[f64]) -> QueryVector {
        QueryVector { weights: w.to_vec() }
    }

    fn dv(w: &[f64]) -> DocVector {
        DocVector {
            doc_id: String::new(),
            weights: w.to_vec(),
            contrib: vec![AxisContribution::default(); w.len()],
        }
    }

    #[test]
    fn tf_examples() {
        let d = doc(&[("cat", 2), ("dog", 1), ("runs", 1)]);
        assert_eq!(tf(&d, "cat"), 0.5);
        assert_eq!(tf(&d, "fish"), 0.0);
        assert_eq!(tf(&doc(&[("solo", 1)]), "solo"), 1.0);
    }

    #[test]
    fn doc_vector_examples() {
        let cfg = WeightingConfig::default();
        assert_eq!(build_doc_vector(&doc(&[("dog", 1)]), &dog_axis(), &cfg).weights, vec![1.0]);
        assert_eq!(build_doc_vector(&doc(&[("canine", 1)]), &dog_axis(), &cfg).weights, vec![0.25]);
        // tf(dog) = 1/2 and tf(canine) = 1/2, so 0.5 + 0.25 * 0.5.
        let v = build_doc_vector(&doc(&[("dog", 1), ("canine", 1)]), &dog_axis(), &cfg);
        assert_abs_diff_eq!(v.weights[0], 0.625, epsilon = 1e-15);
        assert_eq!(v.contrib[0].term_tf, 0.5);
        assert_eq!(v.contrib[0].hypernym_tf_sum, 0.5);
        assert_eq!(v.contrib[0].matched.len(), 2);
    }

    #[test]
    fn collocation_lemmas_match_bigrams() {
        let d = tokenize("my domestic dog", Stopwords::english()).unwrap();
        let v = build_doc_vector(&d, &dog_axis(), &WeightingConfig::default());
        // card 2 (domestic, dog); dog tf 1/2, bigram domestic_dog tf 1/2.
        assert_abs_diff_eq!(v.weights[0], 0.5 + 0.5 * 0.5, epsilon = 1e-15);
    }

    #[test]
    fn query_vector_examples() {
        let axes3 = AxisSet {
            axes: vec![TermExpansion::bare("a"), TermExpansion::bare("b"), TermExpansion::bare("c")],
        };
        let docs3 = vec![dv(&[0.0, 0.0, 0.0])];
        let uniform = WeightingConfig {
            query_weighting: QueryWeighting::Uniform,
            ..Default::default()
        };
        assert_eq!(build_query_vector(&axes3, &docs3, &uniform).unwrap().weights, vec![1.0; 3]);

        let axes = AxisSet { axes: vec![TermExpansion::bare("a")] };
        let idf = WeightingConfig::default();
        let all = vec![dv(&[0.1]), dv(&[0.2]), dv(&[0.3]), dv(&[0.4])];
        assert_eq!(build_query_vector(&axes, &all, &idf).unwrap().weights, vec![1.0]);
        let one = vec![dv(&[0.1]), dv(&[0.0]), dv(&[0.0]), dv(&[0.0])];
        let w = build_query_vector(&axes, &one, &idf).unwrap().weights[0];
        // Hand computation: ln(5/2) + 1 = 0.916290731874155 + 1.
        assert_abs_diff_eq!(w, 1.916290731874155, epsilon = 1e-12);
        assert_eq!(build_query_vector(&axes, &[], &idf), Err(VsmError::EmptyResultSet));
    }

    #[test]
    fn dist_examples() {
        assert_eq!(dist(&qv(&[1.0, 0.0]), &dv(&[0.0, 1.0])).unwrap(), 2.0);
        assert_eq!(dist(&qv(&[0.3, 0.7]), &dv(&[0.3, 0.7])).unwrap(), 0.0);
        assert_eq!(dist(&qv(&[0.5, 0.5]), &dv(&[0.25, 0.75])).unwrap(), 0.5);
        assert!(matches!(
            dist(&qv(&[1.0]), &dv(&[1.0, 2.0])),
            Err(VsmError::DimensionMismatch { query: 1, doc: 2 })
        ));
    }

    #[test]
    fn rsv_examples() {
        assert_abs_diff_eq!(rsv(&qv(&[0.3, 0.4]), &dv(&[0.3, 0.4])).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(rsv(&qv(&[1.0, 0.0]), &dv(&[0.0, 1.0])).unwrap(), 0.0);
        assert_abs_diff_eq!(
            rsv(&qv(&[1.0, 1.0]), &dv(&[1.0, 0.0])).unwrap(),
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-15
        );
        assert_eq!(rsv(&qv(&[1.0, 1.0]), &dv(&[0.0, 0.0])).unwrap(), 0.0);
        assert!(rsv(&qv(&[1.0]), &dv(&[])).is_err());
    }

    #[test]
    fn weighting_validation() {
        assert!(WeightingConfig::default().validate().is_ok());
        assert!(WeightingConfig::literal().validate().is_ok());
        let bad = WeightingConfig { alpha: 0.2, beta: 0.3, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = WeightingConfig { alpha: 1.5, beta: 0.3, ..Default::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn synonym_occurrence_raises_weight() {
        // Document with no other axis-relevant tokens: adding a synonym
        // occurrence takes the weight from 0 to alpha / card.
        let cfg = WeightingConfig::default();
        let mut axes = dog_axis();
        axes.axes[0].synonyms.insert("pooch".into());
        let before = build_doc_vector(&doc(&[("unrelated", 3)]), &axes, &cfg).weights[0];
        let after = build_doc_vector(&doc(&[("unrelated", 3), ("pooch", 1)]), &axes, &cfg).weights[0];
        assert_eq!(before, 0.0);
        assert_eq!(after, 0.5 * 0.25);
    }

    proptest! {
        #[test]
        fn tf_sums_to_one(counts in proptest::collection::btree_map("[a-z]{2,6}", 1u32..20, 1..40)) {
            let d = TokenizedDoc {
                doc_id: String::new(),
                card: counts.values().sum(),
                counts,
                bigrams: BTreeMap::new(),
            };
            let total: f64 = d.counts.keys().map(|w| tf(&d, w)).sum();
            prop_assert!((total - 1.0).abs() <= 1e-9);
        }

        #[test]
        fn weights_are_non_negative(
            counts in proptest::collection::btree_map("[a-e]{2}", 1u32..5, 1..10),
            alpha in 0.0f64..=1.0,
        ) {
            let d = TokenizedDoc {
                doc_id: String::new(),
                card: counts.values().sum(),
                counts,
                bigrams: BTreeMap::new(),
            };
            let axes = AxisSet { axes: vec![TermExpansion {
                term: "aa".into(),
                synonyms: BTreeSet::from(["bb".to_string()]),
                hypernyms: BTreeSet::from(["cc".to_string()]),
            }]};
            let cfg = WeightingConfig { alpha, beta: alpha / 2.0, ..Default::default() };
            let v = build_doc_vector(&d, &axes, &cfg);
            prop_assert!(v.weights.iter().all(|w| *w >= 0.0));
            let c = &v.contrib[0];
            prop_assert!((v.weights[0] - (c.term_tf + alpha * c.synonym_tf_sum + alpha / 2.0 * c.hypernym_tf_sum)).abs() < 1e-15);
        }

        #[test]
        fn rsv_scale_invariant_dist_not(
            pair in (1usize..20).prop_flat_map(|n| (
                proptest::collection::vec(0.01f64..5.0, n),
                proptest::collection::vec(0.01f64..5.0, n),
            )),
            c in 1.5f64..10.0,
        ) {
            let (q, d) = pair;
            let (q, d) = (qv(&q), dv(&d));
            let scaled = dv(&d.weights.iter().map(|x| x * c).collect::<Vec<_>>());
            prop_assert!((rsv(&q, &d).unwrap() - rsv(&q, &scaled).unwrap()).abs() <= 1e-12);
            prop_assert!(dist(&q, &d).unwrap() != dist(&q, &scaled).unwrap());
        }
    }
}
