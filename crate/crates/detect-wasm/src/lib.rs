//! Browser bindings for the detector: train a classifier on a synthetic
//! corpus, compare all implemented models, and classify pasted text — all
//! in-page. Each exported function takes and returns JSON strings; the demo
//! page in `www/` drives them.

use std::cell::RefCell;

use serde::Deserialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

use detect_core::corpus::{stratified_split, synthesize_corpus, synthetic_markers};
use detect_core::pipeline::{
    evaluate_bundle, run_comparison, train_bundle, Bundle, ExperimentConfig, ModelKind, ModelParams,
};

thread_local! {
    static LAST_BUNDLE: RefCell<Option<Bundle>> = const { RefCell::new(None) };
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DemoParams {
    #[serde(default)]
    pub model: Option<String>,
    #[serde(default)]
    pub n_per_class: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub split_ratio: Option<f64>,
    #[serde(default)]
    pub trees: Option<usize>,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub rounds: Option<usize>,
    #[serde(default)]
    pub max_vocab: Option<usize>,
}

impl DemoParams {
    fn config(&self) -> ExperimentConfig {
        ExperimentConfig {
            seed: self.seed.unwrap_or(42),
            split_ratio: self.split_ratio.unwrap_or(0.8).clamp(0.1, 0.9),
            max_vocab: self.max_vocab,
            model_params: ModelParams {
                trees: self.trees,
                k: self.k.unwrap_or(5),
                rounds: self.rounds.unwrap_or(50),
                ..Default::default()
            },
            ..Default::default()
        }
    }

    fn n_per_class(&self) -> usize {
        self.n_per_class.unwrap_or(200).clamp(10, 2000)
    }
}

/// Train the chosen model on a synthetic corpus and evaluate it on the
/// held-out split. Keeps the trained bundle for `classify_text`.
pub fn run_experiment(params_json: &str) -> Result<String, String> {
    let params: DemoParams =
        serde_json::from_str(params_json).map_err(|e| format!("bad params: {e}"))?;
    let kind = match &params.model {
        Some(name) => ModelKind::parse(name).map_err(|e| e.to_string())?,
        None => ModelKind::ExtraTrees,
    };
    let config = params.config();
    let corpus = synthesize_corpus(params.n_per_class(), config.seed);
    let split =
        stratified_split(&corpus, config.split_ratio, config.seed).map_err(|e| e.to_string())?;
    let bundle = train_bundle(&split.train, kind, &config).map_err(|e| e.to_string())?;
    let metrics = evaluate_bundle(&bundle, &split.test, true).map_err(|e| e.to_string())?;

    let response = json!({
        "model": kind.name(),
        "seed": config.seed,
        "dataset": {
            "train": split.train.summary(),
            "test": split.test.summary(),
            "vocabulary_size": bundle.vectorizer.vocab_size(),
        },
        "metrics": metrics,
    });
    LAST_BUNDLE.with(|slot| *slot.borrow_mut() = Some(bundle));
    Ok(response.to_string())
}

/// Train and evaluate every implemented model on one shared synthetic
/// split; rows arrive sorted by MCC with the unimplemented comparison rows
/// appended.
pub fn compare_all(params_json: &str) -> Result<String, String> {
    let params: DemoParams =
        serde_json::from_str(params_json).map_err(|e| format!("bad params: {e}"))?;
    let config = params.config();
    let corpus = synthesize_corpus(params.n_per_class(), config.seed);
    let split =
        stratified_split(&corpus, config.split_ratio, config.seed).map_err(|e| e.to_string())?;
    let report = run_comparison(
        &split.train,
        &split.test,
        &ModelKind::IMPLEMENTED,
        true,
        &config,
    )
    .map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

/// Classify one text with the bundle trained by the last `run_experiment`.
pub fn classify(text: &str) -> Result<String, String> {
    if text.trim().is_empty() {
        return Err("text is empty".to_string());
    }
    LAST_BUNDLE.with(|slot| {
        let slot = slot.borrow();
        let bundle = slot
            .as_ref()
            .ok_or("no trained model yet; run an experiment first")?;
        let prediction = bundle.predict_text(text);
        Ok(json!({
            "label": prediction.label,
            "score": prediction.score,
            "all_oov": prediction.all_oov,
            "model": bundle.model.kind().name(),
        })
        .to_string())
    })
}

/// The marker vocabularies behind the synthetic corpus, so the page can
/// suggest words to type.
pub fn marker_hint() -> String {
    let (human, chatgpt) = synthetic_markers();
    json!({ "human": human, "chatgpt": chatgpt }).to_string()
}

#[wasm_bindgen(start)]
pub fn start() {
    console_error_panic_hook::set_once();
}

#[wasm_bindgen(js_name = runExperiment)]
pub fn run_experiment_js(params_json: &str) -> Result<String, JsValue> {
    run_experiment(params_json).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = compareAll)]
pub fn compare_all_js(params_json: &str) -> Result<String, JsValue> {
    compare_all(params_json).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = classifyText)]
pub fn classify_js(text: &str) -> Result<String, JsValue> {
    classify(text).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = markerHint)]
pub fn marker_hint_js() -> String {
    marker_hint()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn experiment_then_classify() {
        let out = run_experiment(r#"{"model":"extra-trees","n_per_class":40,"seed":9}"#).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(parsed["model"], "extra-trees");
        assert!(parsed["metrics"]["accuracy"].as_f64().unwrap() > 0.8);
        assert!(parsed["metrics"]["roc"].as_array().unwrap().len() >= 2);

        let verdict = classify("furthermore we leverage robust paradigms").unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&verdict).unwrap();
        assert_eq!(parsed["label"], "chatgpt");
    }

    #[test]
    fn classify_without_model_is_an_error() {
        LAST_BUNDLE.with(|slot| *slot.borrow_mut() = None);
        assert!(classify("some text").is_err());
    }

    #[test]
    fn compare_reports_all_rows() {
        let out = compare_all(r#"{"n_per_class":25,"seed":3}"#).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(parsed["models"].as_array().unwrap().len(), 11);
    }

    #[test]
    fn bad_params_are_reported() {
        assert!(run_experiment("{ not json").is_err());
        assert!(run_experiment(r#"{"model":"svm"}"#).is_err());
    }

    #[test]
    fn marker_hint_has_both_classes() {
        let parsed: serde_json::Value = serde_json::from_str(&marker_hint()).unwrap();
        assert!(!parsed["human"].as_array().unwrap().is_empty());
        assert!(!parsed["chatgpt"].as_array().unwrap().is_empty());
    }
}
