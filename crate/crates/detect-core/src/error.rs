//! Crate-wide error type.
//!
//! Data and I/O problems surface as `Error` values so callers (the CLI in
//! particular) can map them to exit codes. Violations of pure-math
//! preconditions (empty node, mismatched lengths) panic instead; those are
//! programming errors, not user input.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("column {0:?} not found in header")]
    MissingColumn(String),

    #[error("row {row}: label {value:?} has no mapping")]
    UnmappedLabel { row: usize, value: String },

    #[error("row {row}: text is empty")]
    EmptyText { row: usize },

    #[error("corpus contains a single class; both classes are required")]
    SingleClass,

    #[error("split ratio {0} is outside (0, 1)")]
    RatioOutOfRange(f64),

    #[error("class {class:?} has too few documents ({count}) to place at least one on each side of the split")]
    ClassTooSmall { class: &'static str, count: usize },

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("vocabulary cap must be at least 1")]
    InvalidVocabCap,

    #[error("k must be an odd positive integer, got {0}")]
    InvalidK(usize),

    #[error("training data is degenerate: {0}")]
    DegenerateData(String),

    #[error("logistic loss became non-finite; lower the learning rate")]
    NonFiniteLoss,

    #[error("roc curve requires both classes in y_true")]
    SingleClassTruth,

    #[error("unknown model {name:?}; valid names: {valid}")]
    UnknownModel { name: String, valid: String },

    #[error("bundle integrity: {0}")]
    BundleMismatch(String),

    #[error(
        "test set fingerprint matches the training set; refusing to evaluate on training data"
    )]
    TrainTestLeak,
}

pub type Result<T> = std::result::Result<T, Error>;
