//! From-scratch toolkit for telling human-written text from
//! ChatGPT-generated text.
//!
//! The pipeline: load and balance a labeled corpus, split it with
//! stratification, vectorize with TF-IDF (stop words retained, natural-log
//! IDF), then train and compare classifiers — Extremely Randomized Trees as
//! the headline model next to Random Forest, Bagging, a single decision
//! tree, logistic regression, k-nearest neighbors and AdaBoost — scored by
//! accuracy, precision, recall, F1, MCC and ROC/AUC with ChatGPT as the
//! positive class.
//!
//! All randomness flows through one seeded, portable generator, so every
//! artifact is reproducible byte for byte from (data, config, seed).

pub mod baselines;
pub mod corpus;
pub mod ensemble;
pub mod error;
pub mod matrix;
pub mod metrics;
pub mod pipeline;
pub mod rng;
pub mod tree;
pub mod vectorizer;

pub use error::{Error, Result};

/// Parse JSON without serde_json's default nesting limit. Unpruned trees
/// serialize as deeply nested records; realistic depths stay far below any
/// stack concern but can exceed the default 128-level parser limit.
pub fn from_json_deep<T: serde::de::DeserializeOwned>(json: &str) -> Result<T> {
    let mut deserializer = serde_json::Deserializer::from_str(json);
    deserializer.disable_recursion_limit();
    let value = T::deserialize(&mut deserializer)?;
    deserializer.end()?;
    Ok(value)
}
