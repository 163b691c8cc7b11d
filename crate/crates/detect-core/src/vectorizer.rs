//! TF-IDF vectorization.
//!
//! Tokenization lowercases and splits on every non-alphanumeric character;
//! stop words are retained on purpose (removing them hurts this task). Term
//! frequency is the relative frequency of a term within one document, and
//! inverse document frequency is the natural log of the corpus size over the
//! term's document count. Vocabulary and document frequencies come from the
//! training documents only.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{SparseMatrix, SparseVector};

/// Lowercase and split on non-alphanumeric characters, dropping empty
/// fragments. Stop words are kept.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

/// Relative frequency of `term` among the document's tokens.
///
/// Panics on an empty document; a document with no tokens has no term
/// frequencies.
pub fn term_frequency(term: &str, tokens: &[String]) -> f64 {
    assert!(!tokens.is_empty(), "term_frequency on an empty document");
    let count = tokens.iter().filter(|t| t.as_str() == term).count();
    count as f64 / tokens.len() as f64
}

/// Vectorizer settings. The tokenization rule and the natural log base are
/// fixed; only the vocabulary cap is configurable.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VectorizerConfig {
    /// Keep at most this many terms, preferring higher document frequency
    /// (ties: lexicographically smaller term). `None` keeps everything.
    pub max_vocab: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TermRecord {
    term: String,
    index: usize,
    df: usize,
    idf: f64,
}

/// Fitted vocabulary with per-term IDF weights.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(from = "VectorizerModelSerde", into = "VectorizerModelSerde")]
pub struct VectorizerModel {
    n_documents: usize,
    terms: Vec<TermRecord>,
    config: VectorizerConfig,
    #[serde(skip)]
    term_to_index: HashMap<String, usize>,
}

/// On-disk shape: `{n_documents, log_base, terms, config}`.
#[derive(Serialize, Deserialize)]
struct VectorizerModelSerde {
    n_documents: usize,
    log_base: String,
    terms: Vec<TermRecord>,
    config: VectorizerConfig,
}

impl From<VectorizerModelSerde> for VectorizerModel {
    fn from(raw: VectorizerModelSerde) -> Self {
        let term_to_index = raw
            .terms
            .iter()
            .map(|t| (t.term.clone(), t.index))
            .collect();
        Self {
            n_documents: raw.n_documents,
            terms: raw.terms,
            config: raw.config,
            term_to_index,
        }
    }
}

impl From<VectorizerModel> for VectorizerModelSerde {
    fn from(model: VectorizerModel) -> Self {
        Self {
            n_documents: model.n_documents,
            log_base: "natural".to_string(),
            terms: model.terms,
            config: model.config,
        }
    }
}

impl VectorizerModel {
    pub fn vocab_size(&self) -> usize {
        self.terms.len()
    }

    pub fn n_documents(&self) -> usize {
        self.n_documents
    }

    pub fn config(&self) -> &VectorizerConfig {
        &self.config
    }

    /// Column index of `term`, if in vocabulary.
    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.term_to_index.get(term).copied()
    }

    /// Document frequency of `term`, if in vocabulary.
    pub fn df_of(&self, term: &str) -> Option<usize> {
        self.index_of(term).map(|i| self.terms[i].df)
    }

    /// `ln(N / df(term))`; `None` for out-of-vocabulary terms, which the
    /// caller will usually skip.
    pub fn idf_of(&self, term: &str) -> Option<f64> {
        self.index_of(term).map(|i| self.terms[i].idf)
    }

    /// TF-IDF vector for one text. Out-of-vocabulary tokens contribute
    /// nothing; a text whose tokens are all out-of-vocabulary (or that has
    /// no tokens at all) yields the empty vector, not an error.
    pub fn transform_one(&self, text: &str) -> SparseVector {
        let tokens = tokenize(text);
        if tokens.is_empty() {
            return SparseVector::new();
        }
        let total = tokens.len() as f64;
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for token in &tokens {
            if let Some(index) = self.index_of(token) {
                *counts.entry(index).or_insert(0) += 1;
            }
        }
        let pairs = counts
            .into_iter()
            .map(|(index, count)| {
                let tf = count as f64 / total;
                (index, tf * self.terms[index].idf)
            })
            .collect();
        SparseVector::from_pairs(pairs)
    }

    /// TF-IDF rows for a batch of texts.
    pub fn transform(&self, texts: &[&str]) -> SparseMatrix {
        let rows = texts.iter().map(|t| self.transform_one(t)).collect();
        SparseMatrix::new(rows, self.vocab_size())
    }
}

/// Fit a vectorizer on training texts only.
///
/// Document frequencies count each document once per term. When a cap is
/// set, the highest-df terms are kept (ties: lexicographically smaller
/// term). Retained terms are indexed in lexicographic order.
pub fn fit_vectorizer(train_texts: &[&str], config: VectorizerConfig) -> Result<VectorizerModel> {
    if train_texts.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if config.max_vocab == Some(0) {
        return Err(Error::InvalidVocabCap);
    }
    let n_documents = train_texts.len();

    let mut df: HashMap<String, usize> = HashMap::new();
    for text in train_texts {
        let mut seen = HashSet::new();
        for token in tokenize(text) {
            if seen.insert(token.clone()) {
                *df.entry(token).or_insert(0) += 1;
            }
        }
    }

    let mut ranked: Vec<(String, usize)> = df.into_iter().collect();
    if let Some(cap) = config.max_vocab {
        if ranked.len() > cap {
            ranked.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            ranked.truncate(cap);
        }
    }
    ranked.sort_unstable_by(|a, b| a.0.cmp(&b.0));

    let terms: Vec<TermRecord> = ranked
        .into_iter()
        .enumerate()
        .map(|(index, (term, df))| TermRecord {
            term,
            index,
            df,
            idf: (n_documents as f64 / df as f64).ln(),
        })
        .collect();
    let term_to_index = terms.iter().map(|t| (t.term.clone(), t.index)).collect();
    Ok(VectorizerModel {
        n_documents,
        terms,
        config,
        term_to_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenize_lowercases_and_splits() {
        assert_eq!(
            tokenize("Hello, world! HELLO"),
            vec!["hello", "world", "hello"]
        );
    }

    #[test]
    fn tokenize_empty() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("!!! ---").is_empty());
    }

    #[test]
    fn tokenize_keeps_stop_words() {
        assert_eq!(
            tokenize("the cat and the hat"),
            vec!["the", "cat", "and", "the", "hat"]
        );
    }

    #[test]
    fn term_frequency_cases() {
        let single = tokenize("a");
        assert_eq!(term_frequency("a", &single), 1.0);
        let doc = tokenize("a b a");
        assert!((term_frequency("a", &doc) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(term_frequency("z", &doc), 0.0);
    }

    #[test]
    #[should_panic(expected = "empty document")]
    fn term_frequency_empty_doc_panics() {
        term_frequency("a", &[]);
    }

    #[test]
    fn fit_counts_document_frequencies() {
        let model = fit_vectorizer(&["a b", "b c"], VectorizerConfig::default()).unwrap();
        assert_eq!(model.vocab_size(), 3);
        assert_eq!(model.n_documents(), 2);
        assert_eq!(model.df_of("a"), Some(1));
        assert_eq!(model.df_of("b"), Some(2));
        assert_eq!(model.df_of("c"), Some(1));
    }

    #[test]
    fn fit_cap_keeps_highest_df() {
        let model =
            fit_vectorizer(&["a b", "b c"], VectorizerConfig { max_vocab: Some(1) }).unwrap();
        assert_eq!(model.vocab_size(), 1);
        assert_eq!(model.df_of("b"), Some(2));
    }

    #[test]
    fn fit_cap_tie_breaks_lexicographically() {
        // All four terms have df 1; cap 2 keeps the lexicographically
        // smallest pair.
        let model = fit_vectorizer(&["d c b a"], VectorizerConfig { max_vocab: Some(2) }).unwrap();
        assert!(model.index_of("a").is_some());
        assert!(model.index_of("b").is_some());
        assert!(model.index_of("c").is_none());
    }

    #[test]
    fn fit_degenerate_single_doc() {
        let model = fit_vectorizer(&["x x x"], VectorizerConfig::default()).unwrap();
        assert_eq!(model.vocab_size(), 1);
        assert_eq!(model.idf_of("x"), Some(0.0));
    }

    #[test]
    fn fit_empty_corpus_errors() {
        assert!(matches!(
            fit_vectorizer(&[], VectorizerConfig::default()),
            Err(Error::EmptyCorpus)
        ));
    }

    #[test]
    fn fit_zero_cap_errors() {
        assert!(matches!(
            fit_vectorizer(&["a"], VectorizerConfig { max_vocab: Some(0) }),
            Err(Error::InvalidVocabCap)
        ));
    }

    #[test]
    fn idf_values() {
        // N=4, df(a)=1, df(b)=2 -> idf(a)=ln 4, idf(b)=ln 2.
        let model = fit_vectorizer(&["a b", "b x", "y", "z"], VectorizerConfig::default()).unwrap();
        assert!((model.idf_of("a").unwrap() - 4.0f64.ln()).abs() < 1e-12);
        assert!((model.idf_of("b").unwrap() - 2.0f64.ln()).abs() < 1e-12);
        assert_eq!(model.idf_of("missing"), None);
    }

    #[test]
    fn transform_hand_computed() {
        // Fitted on ["a b", "b c"]: transforming "a a" gives TF(a)=1.0 and
        // idf(a)=ln 2, so the single entry is (index(a), ln 2).
        let model = fit_vectorizer(&["a b", "b c"], VectorizerConfig::default()).unwrap();
        let v = model.transform_one("a a");
        assert_eq!(v.nnz(), 1);
        let idx = model.index_of("a").unwrap();
        assert!((v.get(idx) - 2.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn transform_ubiquitous_term_drops_to_empty() {
        let model = fit_vectorizer(&["a b", "b c"], VectorizerConfig::default()).unwrap();
        let v = model.transform_one("b");
        assert!(v.is_empty());
    }

    #[test]
    fn transform_oov_is_empty_row() {
        let model = fit_vectorizer(&["a b", "b c"], VectorizerConfig::default()).unwrap();
        assert!(model.transform_one("zzz").is_empty());
        assert!(model.transform_one("").is_empty());
    }

    #[test]
    fn transform_does_not_change_model() {
        let model = fit_vectorizer(&["a b", "b c"], VectorizerConfig::default()).unwrap();
        let before = serde_json::to_string(&model).unwrap();
        let _ = model.transform(&["new words never seen", "a b c"]);
        let after = serde_json::to_string(&model).unwrap();
        assert_eq!(before, after);
    }

    #[test]
    fn model_json_round_trip() {
        let model = fit_vectorizer(&["a b", "b c d"], VectorizerConfig::default()).unwrap();
        let json = serde_json::to_string(&model).unwrap();
        assert!(json.contains("\"log_base\":\"natural\""));
        let back: VectorizerModel = serde_json::from_str(&json).unwrap();
        assert_eq!(back.vocab_size(), model.vocab_size());
        let v1 = model.transform_one("a d");
        let v2 = back.transform_one("a d");
        assert_eq!(v1, v2);
    }
}
