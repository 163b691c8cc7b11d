//! `detect` — train and evaluate human-vs-ChatGPT text classifiers.
//!
//! Exit codes: 0 success, 2 input/config/data error, 3 train-test leak
//! guard. A panic (internal bug) exits with the Rust default of 101.

mod commands;
mod output;

use std::collections::HashMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use detect_core::corpus::Label;
use detect_core::pipeline::{ExperimentConfig, ModelParams};
use detect_core::Error;

const EXIT_INPUT: u8 = 2;
const EXIT_LEAK: u8 = 3;

#[derive(Parser)]
#[command(
    name = "detect",
    about = "Train and evaluate classifiers that tell human-written text from ChatGPT-generated text",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a labeled CSV, balance by undersampling, and write a
    /// stratified train/test split plus a JSON summary
    Prepare(PrepareArgs),
    /// Fit the TF-IDF vectorizer and one classifier; write a bundle file
    Train(TrainArgs),
    /// Score a bundle on a labeled test CSV; write a JSON report and an
    /// ROC CSV
    Evaluate(EvaluateArgs),
    /// Train and evaluate every implemented model on one shared split
    Compare(CompareArgs),
    /// Classify raw text with a trained bundle
    Predict(PredictArgs),
}

#[derive(Args)]
struct DataArgs {
    /// Labeled input CSV (header row required)
    #[arg(long)]
    data: String,
    /// Column holding the raw text
    #[arg(long, default_value = "text")]
    text_column: String,
    /// Column holding the class label
    #[arg(long, default_value = "label")]
    label_column: String,
    /// Comma-separated label values mapped to the human class
    #[arg(long, default_value = "human,0")]
    human_label: String,
    /// Comma-separated label values mapped to the chatgpt class
    #[arg(long, default_value = "chatgpt,1")]
    chatgpt_label: String,
}

impl DataArgs {
    fn label_mapping(&self) -> HashMap<String, Label> {
        let mut mapping = HashMap::new();
        for value in self.human_label.split(',').filter(|v| !v.is_empty()) {
            mapping.insert(value.to_string(), Label::Human);
        }
        for value in self.chatgpt_label.split(',').filter(|v| !v.is_empty()) {
            mapping.insert(value.to_string(), Label::ChatGPT);
        }
        mapping
    }
}

#[derive(Args)]
struct HyperParams {
    /// Tree count for the ensembles (defaults: extra-trees 50,
    /// random-forest 100, bagging 10)
    #[arg(long)]
    trees: Option<usize>,
    /// Neighbor count for knn (odd)
    #[arg(long, default_value_t = 5)]
    k: usize,
    /// Gradient-descent learning rate for logistic regression
    #[arg(long, default_value_t = 0.1)]
    learning_rate: f64,
    /// Gradient-descent epoch cap for logistic regression
    #[arg(long, default_value_t = 300)]
    epochs: usize,
    /// L2 penalty for logistic regression
    #[arg(long, default_value_t = 1e-4)]
    l2: f64,
    /// Boosting rounds for adaboost
    #[arg(long, default_value_t = 50)]
    rounds: usize,
}

impl HyperParams {
    fn model_params(&self) -> ModelParams {
        ModelParams {
            trees: self.trees,
            k: self.k,
            learning_rate: self.learning_rate,
            epochs: self.epochs,
            l2: self.l2,
            rounds: self.rounds,
        }
    }
}

#[derive(Args)]
struct PrepareArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Seed for balancing and splitting
    #[arg(long, env = "DETECT_SEED", default_value_t = 42)]
    seed: u64,
    /// Train fraction of the split
    #[arg(long, default_value_t = 0.8)]
    split: f64,
    /// Skip undersampling
    #[arg(long)]
    no_balance: bool,
    /// Output directory for train.csv, test.csv and summary.json
    #[arg(long, default_value = "prepared")]
    out: String,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Model to train: extra-trees, random-forest, bagging, decision-tree,
    /// logistic-regression, knn, adaboost
    #[arg(long)]
    model: String,
    #[arg(long, env = "DETECT_SEED", default_value_t = 42)]
    seed: u64,
    /// Keep only the highest-document-frequency terms
    #[arg(long)]
    max_vocab: Option<usize>,
    #[command(flatten)]
    hyper: HyperParams,
    /// Bundle file to write
    #[arg(long, default_value = "model.json")]
    out: String,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Trained bundle file
    #[arg(long)]
    bundle: String,
    #[command(flatten)]
    data: DataArgs,
    /// Report JSON to write
    #[arg(long, default_value = "report.json")]
    out: String,
    /// ROC points CSV to write
    #[arg(long, default_value = "roc.csv")]
    roc_out: String,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, env = "DETECT_SEED", default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 0.8)]
    split: f64,
    #[arg(long)]
    no_balance: bool,
    #[arg(long)]
    max_vocab: Option<usize>,
    /// Comma-separated subset of models to run (default: all implemented)
    #[arg(long)]
    models: Option<String>,
    /// Re-run the whole pipeline this many times with derived seeds and
    /// report mean and standard deviation
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    #[command(flatten)]
    hyper: HyperParams,
    /// Output directory for report.json and per-model ROC CSVs
    #[arg(long, default_value = "compare-out")]
    out: String,
}

#[derive(Args)]
struct PredictArgs {
    /// Trained bundle file
    #[arg(long)]
    bundle: String,
    /// A single text to classify
    #[arg(long, conflicts_with = "input")]
    text: Option<String>,
    /// File with one text per line
    #[arg(long)]
    input: Option<String>,
}

fn experiment_config(
    data: &DataArgs,
    seed: u64,
    split: f64,
    balance: bool,
    max_vocab: Option<usize>,
    params: ModelParams,
) -> ExperimentConfig {
    ExperimentConfig {
        data: Some(data.data.clone()),
        text_column: data.text_column.clone(),
        label_column: data.label_column.clone(),
        seed,
        split_ratio: split,
        balance,
        max_vocab,
        model: None,
        model_params: params,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Prepare(args) => commands::prepare(args),
        Command::Train(args) => commands::train(args),
        Command::Evaluate(args) => commands::evaluate(args),
        Command::Compare(args) => commands::compare(args),
        Command::Predict(args) => commands::predict(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::TrainTestLeak => ExitCode::from(EXIT_LEAK),
                _ => ExitCode::from(EXIT_INPUT),
            }
        }
    }
}
