//! End-to-end plumbing shared by the CLI and the browser demo: model kinds,
//! trained bundles (vectorizer + classifier + config), evaluation and the
//! multi-model comparison.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{
    adaboost_scores, fit_adaboost, fit_knn, fit_logistic_regression, knn_predict_proba,
    predict_logistic, BoostedModel, KnnModel, LinearModel, LogisticConfig,
};
use crate::corpus::{CorpusSummary, Label, LabeledCorpus};
use crate::ensemble::{
    fit_bagging, fit_extra_trees, fit_random_forest, Ensemble, DEFAULT_BAGGING_TREES,
    DEFAULT_EXTRA_TREES, DEFAULT_RANDOM_FOREST_TREES,
};
use crate::error::{Error, Result};
use crate::matrix::SparseMatrix;
use crate::metrics::{evaluate_scores, MetricsReport};
use crate::tree::{fit_decision_tree, DecisionTree};
use crate::vectorizer::{fit_vectorizer, tokenize, VectorizerConfig, VectorizerModel};

pub const BUNDLE_SCHEMA_VERSION: u32 = 1;

/// Every trainable model kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    ExtraTrees,
    RandomForest,
    Bagging,
    DecisionTree,
    LogisticRegression,
    Knn,
    AdaBoost,
}

impl ModelKind {
    pub const IMPLEMENTED: [ModelKind; 7] = [
        ModelKind::ExtraTrees,
        ModelKind::RandomForest,
        ModelKind::Bagging,
        ModelKind::DecisionTree,
        ModelKind::LogisticRegression,
        ModelKind::Knn,
        ModelKind::AdaBoost,
    ];

    /// Comparison rows reported as present but not implemented here.
    pub const NOT_IMPLEMENTED: [&'static str; 4] = ["svm", "gradient-boosting", "mlp", "lstm"];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::ExtraTrees => "extra-trees",
            ModelKind::RandomForest => "random-forest",
            ModelKind::Bagging => "bagging",
            ModelKind::DecisionTree => "decision-tree",
            ModelKind::LogisticRegression => "logistic-regression",
            ModelKind::Knn => "knn",
            ModelKind::AdaBoost => "adaboost",
        }
    }

    pub fn parse(name: &str) -> Result<ModelKind> {
        let kind = match name {
            "extra-trees" | "ertc" => ModelKind::ExtraTrees,
            "random-forest" => ModelKind::RandomForest,
            "bagging" => ModelKind::Bagging,
            "decision-tree" => ModelKind::DecisionTree,
            "logistic-regression" | "logistic" => ModelKind::LogisticRegression,
            "knn" => ModelKind::Knn,
            "adaboost" => ModelKind::AdaBoost,
            other => {
                return Err(Error::UnknownModel {
                    name: other.to_string(),
                    valid: ModelKind::IMPLEMENTED
                        .iter()
                        .map(|k| k.name())
                        .collect::<Vec<_>>()
                        .join(", "),
                })
            }
        };
        Ok(kind)
    }
}

/// Hyperparameters for the trainable models; fields irrelevant to a given
/// kind are ignored by it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Tree count for the ensembles; `None` picks the per-kind default
    /// (50 extra-trees, 100 random-forest, 10 bagging).
    pub trees: Option<usize>,
    pub k: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2: f64,
    pub rounds: usize,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            trees: None,
            k: 5,
            learning_rate: 0.1,
            epochs: 300,
            l2: 1e-4,
            rounds: 50,
        }
    }
}

/// Everything that determines a run, embedded verbatim in bundles and
/// reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub data: Option<String>,
    pub text_column: String,
    pub label_column: String,
    pub seed: u64,
    pub split_ratio: f64,
    pub balance: bool,
    pub max_vocab: Option<usize>,
    pub model: Option<String>,
    pub model_params: ModelParams,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            data: None,
            text_column: "text".to_string(),
            label_column: "label".to_string(),
            seed: 42,
            split_ratio: 0.8,
            balance: true,
            max_vocab: None,
            model: None,
            model_params: ModelParams::default(),
        }
    }
}

/// A trained classifier of any kind.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "model_type", rename_all = "kebab-case")]
pub enum ClassifierModel {
    DecisionTree(DecisionTree),
    Ensemble(Ensemble),
    LogisticRegression(LinearModel),
    Knn(KnnModel),
    AdaBoost(BoostedModel),
}

impl ClassifierModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            ClassifierModel::DecisionTree(_) => ModelKind::DecisionTree,
            ClassifierModel::Ensemble(e) => match e.kind {
                crate::ensemble::EnsembleKind::ExtraTrees => ModelKind::ExtraTrees,
                crate::ensemble::EnsembleKind::RandomForest => ModelKind::RandomForest,
                crate::ensemble::EnsembleKind::Bagging => ModelKind::Bagging,
            },
            ClassifierModel::LogisticRegression(_) => ModelKind::LogisticRegression,
            ClassifierModel::Knn(_) => ModelKind::Knn,
            ClassifierModel::AdaBoost(_) => ModelKind::AdaBoost,
        }
    }

    /// Positive-class score in [0, 1] per row.
    pub fn predict_proba(&self, x: &SparseMatrix) -> Vec<f64> {
        match self {
            ClassifierModel::DecisionTree(m) => m.predict_proba(x),
            ClassifierModel::Ensemble(m) => m.predict_proba(x),
            ClassifierModel::LogisticRegression(m) => predict_logistic(m, x),
            ClassifierModel::Knn(m) => x.rows().iter().map(|r| knn_predict_proba(m, r)).collect(),
            ClassifierModel::AdaBoost(m) => adaboost_scores(m, x),
        }
    }

    /// Hard labels: ChatGPT iff score > 0.5, the tie going Human.
    pub fn predict(&self, x: &SparseMatrix) -> Vec<Label> {
        self.predict_proba(x)
            .into_iter()
            .map(|p| {
                if p > 0.5 {
                    Label::ChatGPT
                } else {
                    Label::Human
                }
            })
            .collect()
    }
}

/// Train one classifier on already-vectorized data.
pub fn train_classifier(
    kind: ModelKind,
    x: &SparseMatrix,
    y: &[usize],
    seed: u64,
    params: &ModelParams,
) -> Result<ClassifierModel> {
    let model = match kind {
        ModelKind::ExtraTrees => ClassifierModel::Ensemble(fit_extra_trees(
            x,
            y,
            params.trees.unwrap_or(DEFAULT_EXTRA_TREES),
            seed,
        )?),
        ModelKind::RandomForest => ClassifierModel::Ensemble(fit_random_forest(
            x,
            y,
            params.trees.unwrap_or(DEFAULT_RANDOM_FOREST_TREES),
            seed,
        )?),
        ModelKind::Bagging => ClassifierModel::Ensemble(fit_bagging(
            x,
            y,
            params.trees.unwrap_or(DEFAULT_BAGGING_TREES),
            seed,
        )?),
        ModelKind::DecisionTree => ClassifierModel::DecisionTree(fit_decision_tree(x, y, seed)?),
        ModelKind::LogisticRegression => {
            ClassifierModel::LogisticRegression(fit_logistic_regression(
                x,
                y,
                LogisticConfig {
                    learning_rate: params.learning_rate,
                    epochs: params.epochs,
                    l2: params.l2,
                    seed,
                },
            )?)
        }
        ModelKind::Knn => ClassifierModel::Knn(fit_knn(x, y, params.k)?),
        ModelKind::AdaBoost => ClassifierModel::AdaBoost(fit_adaboost(x, y, params.rounds)?),
    };
    Ok(model)
}

/// A self-contained trained artifact: vectorizer, classifier and the config
/// that produced them, plus the training-set fingerprint for the leak
/// guard.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Bundle {
    pub schema_version: u32,
    pub config: ExperimentConfig,
    pub train_fingerprint: String,
    pub n_features: usize,
    pub vectorizer: VectorizerModel,
    pub model: ClassifierModel,
}

impl Bundle {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(json: &str) -> Result<Bundle> {
        let bundle: Bundle = crate::from_json_deep(json)?;
        bundle.check_integrity()?;
        Ok(bundle)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Bundle> {
        let json = std::fs::read_to_string(path)?;
        Bundle::from_json(&json)
    }

    /// Cross-checks between the vectorizer and the classifier.
    pub fn check_integrity(&self) -> Result<()> {
        if self.n_features != self.vectorizer.vocab_size() {
            return Err(Error::BundleMismatch(format!(
                "vectorizer has {} terms but the bundle records {} features",
                self.vectorizer.vocab_size(),
                self.n_features
            )));
        }
        if let ClassifierModel::LogisticRegression(m) = &self.model {
            if m.weights.len() != self.n_features {
                return Err(Error::BundleMismatch(format!(
                    "linear model has {} weights but the bundle records {} features",
                    m.weights.len(),
                    self.n_features
                )));
            }
        }
        Ok(())
    }

    /// Score one raw text. `all_oov` flags a text none of whose tokens are
    /// in the vocabulary (its score falls back to the model's zero-vector
    /// output).
    pub fn predict_text(&self, text: &str) -> TextPrediction {
        let tokens = tokenize(text);
        let all_oov = tokens.iter().all(|t| self.vectorizer.index_of(t).is_none());
        let x = self.vectorizer.transform(&[text]);
        let score = self.model.predict_proba(&x)[0];
        let label = if score > 0.5 {
            Label::ChatGPT
        } else {
            Label::Human
        };
        TextPrediction {
            label,
            score,
            all_oov,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TextPrediction {
    pub label: Label,
    pub score: f64,
    pub all_oov: bool,
}

/// Fit the vectorizer and the named model on a training corpus.
pub fn train_bundle(
    train: &LabeledCorpus,
    kind: ModelKind,
    config: &ExperimentConfig,
) -> Result<Bundle> {
    if train.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if train.count(Label::Human) == 0 || train.count(Label::ChatGPT) == 0 {
        return Err(Error::SingleClass);
    }
    let vectorizer = fit_vectorizer(
        &train.texts(),
        VectorizerConfig {
            max_vocab: config.max_vocab,
        },
    )?;
    let x = vectorizer.transform(&train.texts());
    let y: Vec<usize> = train.labels().iter().map(|l| l.index()).collect();
    let model = train_classifier(kind, &x, &y, config.seed, &config.model_params)?;
    let mut config = config.clone();
    config.model = Some(kind.name().to_string());
    Ok(Bundle {
        schema_version: BUNDLE_SCHEMA_VERSION,
        config,
        train_fingerprint: train.fingerprint(),
        n_features: vectorizer.vocab_size(),
        vectorizer,
        model,
    })
}

/// Score a bundle on a labeled corpus. With the leak guard on, a corpus
/// whose fingerprint matches the bundle's training set is refused.
pub fn evaluate_bundle(
    bundle: &Bundle,
    test: &LabeledCorpus,
    leak_guard: bool,
) -> Result<MetricsReport> {
    if test.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if leak_guard && test.fingerprint() == bundle.train_fingerprint {
        return Err(Error::TrainTestLeak);
    }
    let x = bundle.vectorizer.transform(&test.texts());
    let scores = bundle.model.predict_proba(&x);
    evaluate_scores(&test.labels(), &scores)
}

/// One row of a comparison run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelRow {
    pub model: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metrics: Option<MetricsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub train_seconds: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eval_seconds: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub train: CorpusSummary,
    pub test: CorpusSummary,
    pub vocabulary_size: usize,
}

/// Comparison report: shared config and dataset, one row per model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ExperimentConfig,
    pub dataset: DatasetSummary,
    pub models: Vec<ModelRow>,
}

/// Wall clock that degrades to "no measurement" where std::time::Instant
/// is unavailable (browser wasm).
struct Stopwatch {
    #[cfg(not(target_arch = "wasm32"))]
    start: std::time::Instant,
}

impl Stopwatch {
    fn start() -> Self {
        Self {
            #[cfg(not(target_arch = "wasm32"))]
            start: std::time::Instant::now(),
        }
    }

    fn elapsed_seconds(&self) -> Option<f64> {
        #[cfg(not(target_arch = "wasm32"))]
        {
            Some(self.start.elapsed().as_secs_f64())
        }
        #[cfg(target_arch = "wasm32")]
        {
            None
        }
    }
}

/// Train and evaluate every requested model on one shared split and one
/// shared vectorizer, so row differences are attributable to the models
/// alone. A failing model becomes a `failed: ...` row instead of aborting
/// the run. Implemented rows come first, sorted by MCC descending (ties by
/// name); the known-but-unimplemented models are appended as
/// `not-implemented` rows when `include_not_implemented` is set.
pub fn run_comparison(
    train: &LabeledCorpus,
    test: &LabeledCorpus,
    kinds: &[ModelKind],
    include_not_implemented: bool,
    config: &ExperimentConfig,
) -> Result<RunReport> {
    if train.is_empty() || test.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let vectorizer = fit_vectorizer(
        &train.texts(),
        VectorizerConfig {
            max_vocab: config.max_vocab,
        },
    )?;
    let x_train = vectorizer.transform(&train.texts());
    let x_test = vectorizer.transform(&test.texts());
    let y_train: Vec<usize> = train.labels().iter().map(|l| l.index()).collect();
    let y_test = test.labels();

    let evaluate_one = |kind: &ModelKind| -> ModelRow {
        let train_clock = Stopwatch::start();
        let model =
            match train_classifier(*kind, &x_train, &y_train, config.seed, &config.model_params) {
                Ok(model) => model,
                Err(err) => {
                    return ModelRow {
                        model: kind.name().to_string(),
                        status: format!("failed: {err}"),
                        metrics: None,
                        train_seconds: None,
                        eval_seconds: None,
                    }
                }
            };
        let train_seconds = train_clock.elapsed_seconds();
        let eval_clock = Stopwatch::start();
        let scores = model.predict_proba(&x_test);
        let row = match evaluate_scores(&y_test, &scores) {
            Ok(metrics) => ModelRow {
                model: kind.name().to_string(),
                status: "ok".to_string(),
                metrics: Some(metrics),
                train_seconds,
                eval_seconds: eval_clock.elapsed_seconds(),
            },
            Err(err) => ModelRow {
                model: kind.name().to_string(),
                status: format!("failed: {err}"),
                metrics: None,
                train_seconds,
                eval_seconds: None,
            },
        };
        row
    };

    let mut rows: Vec<ModelRow> = if cfg!(target_arch = "wasm32") {
        kinds.iter().map(evaluate_one).collect()
    } else {
        kinds.par_iter().map(evaluate_one).collect()
    };

    rows.sort_by(|a, b| {
        let mcc = |r: &ModelRow| r.metrics.as_ref().map(|m| m.mcc);
        match (mcc(a), mcc(b)) {
            (Some(x), Some(y)) => y.total_cmp(&x).then_with(|| a.model.cmp(&b.model)),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => a.model.cmp(&b.model),
        }
    });
    if include_not_implemented {
        for name in ModelKind::NOT_IMPLEMENTED {
            rows.push(ModelRow {
                model: name.to_string(),
                status: "not-implemented".to_string(),
                metrics: None,
                train_seconds: None,
                eval_seconds: None,
            });
        }
    }

    Ok(RunReport {
        config: config.clone(),
        dataset: DatasetSummary {
            train: train.summary(),
            test: test.summary(),
            vocabulary_size: vectorizer.vocab_size(),
        },
        models: rows,
    })
}
