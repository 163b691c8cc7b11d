//! Subcommand implementations.

use std::fs;
use std::io::BufRead;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use detect_core::corpus::{load_csv, stratified_split, undersample_balance, LabeledCorpus};
use detect_core::pipeline::{
    evaluate_bundle, run_comparison, train_bundle, Bundle, ModelKind, ModelRow, RunReport,
};
use detect_core::rng::mix_seed;
use detect_core::{Error, Result};

use crate::output::{fnv1a_hex, render_table, write_roc_csv};
use crate::{experiment_config, CompareArgs, EvaluateArgs, PredictArgs, PrepareArgs, TrainArgs};

fn load(args: &crate::DataArgs) -> Result<LabeledCorpus> {
    load_csv(
        &args.data,
        &args.text_column,
        &args.label_column,
        &args.label_mapping(),
    )
}

pub fn prepare(args: PrepareArgs) -> Result<()> {
    let corpus = load(&args.data)?;
    let before = corpus.summary();
    let balanced = if args.no_balance {
        corpus
    } else {
        undersample_balance(&corpus, args.seed)?
    };
    let after = balanced.summary();
    let split = stratified_split(&balanced, args.split, args.seed)?;

    let out = Path::new(&args.out);
    fs::create_dir_all(out)?;
    let train_path = out.join("train.csv");
    let test_path = out.join("test.csv");
    split.train.write_csv(&train_path)?;
    split.test.write_csv(&test_path)?;

    let summary = json!({
        "n_total": before.n_total,
        "n_per_class": { "human": after.n_human, "chatgpt": after.n_chatgpt },
        "counts_before": { "human": before.n_human, "chatgpt": before.n_chatgpt },
        "counts_after": { "human": after.n_human, "chatgpt": after.n_chatgpt },
        "balance_applied": !args.no_balance,
        "seed": args.seed,
        "ratio": args.split,
        "train": split.train.summary(),
        "test": split.test.summary(),
        "train_path": train_path,
        "test_path": test_path,
    });
    fs::write(
        out.join("summary.json"),
        serde_json::to_string_pretty(&summary)?,
    )?;

    println!(
        "prepared {} documents (human {}, chatgpt {}) -> train {} / test {} in {}",
        before.n_total,
        after.n_human,
        after.n_chatgpt,
        split.train.len(),
        split.test.len(),
        args.out
    );
    Ok(())
}

pub fn train(args: TrainArgs) -> Result<()> {
    let kind = ModelKind::parse(&args.model)?;
    let corpus = load(&args.data)?;
    let config = experiment_config(
        &args.data,
        args.seed,
        0.8,
        true,
        args.max_vocab,
        args.hyper.model_params(),
    );
    let started = Instant::now();
    let bundle = train_bundle(&corpus, kind, &config)?;
    bundle.save(&args.out)?;
    println!(
        "trained {} on {} documents ({} terms) in {:.2}s -> {}",
        kind.name(),
        corpus.len(),
        bundle.vectorizer.vocab_size(),
        started.elapsed().as_secs_f64(),
        args.out
    );
    Ok(())
}

#[derive(Serialize)]
struct EvaluateReport {
    config: detect_core::pipeline::ExperimentConfig,
    config_hash: String,
    bundle_path: String,
    data_path: String,
    dataset: detect_core::corpus::CorpusSummary,
    model: String,
    metrics: detect_core::metrics::MetricsReport,
    eval_seconds: f64,
    roc_csv: String,
}

pub fn evaluate(args: EvaluateArgs) -> Result<()> {
    let bundle = Bundle::load(&args.bundle)?;
    let test = load(&args.data)?;
    let started = Instant::now();
    let metrics = evaluate_bundle(&bundle, &test, true)?;
    let eval_seconds = started.elapsed().as_secs_f64();

    write_roc_csv(&args.roc_out, &metrics.roc)?;
    let report = EvaluateReport {
        config_hash: fnv1a_hex(&serde_json::to_string(&bundle.config)?),
        config: bundle.config.clone(),
        bundle_path: args.bundle.clone(),
        data_path: args.data.data.clone(),
        dataset: test.summary(),
        model: bundle.model.kind().name().to_string(),
        metrics: metrics.clone(),
        eval_seconds,
        roc_csv: args.roc_out.clone(),
    };
    fs::write(&args.out, serde_json::to_string_pretty(&report)?)?;

    let row = ModelRow {
        model: report.model.clone(),
        status: "ok".to_string(),
        metrics: Some(metrics.clone()),
        train_seconds: None,
        eval_seconds: Some(eval_seconds),
    };
    print!("{}", render_table(std::slice::from_ref(&row)));
    println!(
        "confusion: tp {} tn {} fp {} fn {}  |  report {}  roc {}",
        metrics.confusion.tp,
        metrics.confusion.tn,
        metrics.confusion.fp,
        metrics.confusion.fn_,
        args.out,
        args.roc_out
    );
    if !metrics.degenerate.is_empty() {
        println!("degenerate denominators: {}", metrics.degenerate.join(", "));
    }
    Ok(())
}

/// Mean and sample standard deviation.
fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[derive(Serialize)]
struct AggregateRow {
    model: String,
    status: String,
    runs: usize,
    mean: Option<serde_json::Value>,
    std: Option<serde_json::Value>,
}

fn aggregate_rows(runs: &[RunReport]) -> Vec<AggregateRow> {
    let mut order: Vec<String> = Vec::new();
    for run in runs {
        for row in &run.models {
            if !order.contains(&row.model) {
                order.push(row.model.clone());
            }
        }
    }
    let mut rows: Vec<AggregateRow> = order
        .iter()
        .map(|name| {
            let collected: Vec<&ModelRow> = runs
                .iter()
                .flat_map(|r| r.models.iter().filter(|m| m.model == *name))
                .collect();
            let ok: Vec<&ModelRow> = collected
                .iter()
                .filter(|r| r.status == "ok")
                .copied()
                .collect();
            if ok.is_empty() {
                return AggregateRow {
                    model: name.clone(),
                    status: collected
                        .first()
                        .map(|r| r.status.clone())
                        .unwrap_or_else(|| "missing".to_string()),
                    runs: 0,
                    mean: None,
                    std: None,
                };
            }
            let metric = |f: fn(&detect_core::metrics::MetricsReport) -> f64| -> Vec<f64> {
                ok.iter().map(|r| f(r.metrics.as_ref().unwrap())).collect()
            };
            let fields: [(&str, Vec<f64>); 6] = [
                ("accuracy", metric(|m| m.accuracy)),
                ("precision", metric(|m| m.precision)),
                ("recall", metric(|m| m.recall)),
                ("f1", metric(|m| m.f1)),
                ("mcc", metric(|m| m.mcc)),
                ("auc", metric(|m| m.auc)),
            ];
            let mut means = serde_json::Map::new();
            let mut stds = serde_json::Map::new();
            for (key, values) in fields {
                let (mean, std) = mean_std(&values);
                means.insert(key.to_string(), json!(mean));
                stds.insert(key.to_string(), json!(std));
            }
            AggregateRow {
                model: name.clone(),
                status: "ok".to_string(),
                runs: ok.len(),
                mean: Some(serde_json::Value::Object(means)),
                std: Some(serde_json::Value::Object(stds)),
            }
        })
        .collect();
    rows.sort_by(|a, b| {
        let mcc = |r: &AggregateRow| {
            r.mean
                .as_ref()
                .and_then(|m| m.get("mcc"))
                .and_then(|v| v.as_f64())
        };
        match (mcc(a), mcc(b)) {
            (Some(x), Some(y)) => y.total_cmp(&x).then_with(|| a.model.cmp(&b.model)),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => a.model.cmp(&b.model),
        }
    });
    rows
}

pub fn compare(args: CompareArgs) -> Result<()> {
    let kinds: Vec<ModelKind> = match &args.models {
        Some(list) => list
            .split(',')
            .filter(|s| !s.is_empty())
            .map(ModelKind::parse)
            .collect::<Result<Vec<_>>>()?,
        None => ModelKind::IMPLEMENTED.to_vec(),
    };
    let include_not_implemented = args.models.is_none();
    if args.repeats == 0 {
        return Err(Error::DegenerateData("--repeats must be at least 1".into()));
    }

    let corpus = load(&args.data)?;
    let out = Path::new(&args.out);
    fs::create_dir_all(out)?;

    let mut runs: Vec<RunReport> = Vec::new();
    for repeat in 0..args.repeats {
        let seed = if repeat == 0 {
            args.seed
        } else {
            mix_seed(args.seed, repeat as u64)
        };
        let balanced = if args.no_balance {
            corpus.clone()
        } else {
            undersample_balance(&corpus, seed)?
        };
        let split = stratified_split(&balanced, args.split, seed)?;
        let config = experiment_config(
            &args.data,
            seed,
            args.split,
            !args.no_balance,
            args.max_vocab,
            args.hyper.model_params(),
        );
        let report = run_comparison(
            &split.train,
            &split.test,
            &kinds,
            include_not_implemented,
            &config,
        )?;
        if repeat == 0 {
            for row in &report.models {
                if let Some(metrics) = &row.metrics {
                    write_roc_csv(out.join(format!("roc-{}.csv", row.model)), &metrics.roc)?;
                }
            }
        }
        runs.push(report);
    }

    let aggregate = aggregate_rows(&runs);
    let report = json!({
        "seed": args.seed,
        "repeats": args.repeats,
        "models_requested": kinds.iter().map(|k| k.name()).collect::<Vec<_>>(),
        "runs": runs,
        "aggregate": aggregate,
    });
    fs::write(
        out.join("report.json"),
        serde_json::to_string_pretty(&report)?,
    )?;

    print!("{}", render_table(&runs[0].models));
    if args.repeats > 1 {
        println!("\nmean over {} repeats (std in report.json):", args.repeats);
        let mean_rows: Vec<ModelRow> = aggregate
            .iter()
            .map(|a| ModelRow {
                model: a.model.clone(),
                status: a.status.clone(),
                metrics: a.mean.as_ref().map(|m| {
                    let g = |k: &str| m.get(k).and_then(|v| v.as_f64()).unwrap_or(0.0);
                    detect_core::metrics::MetricsReport {
                        accuracy: g("accuracy"),
                        precision: g("precision"),
                        recall: g("recall"),
                        f1: g("f1"),
                        mcc: g("mcc"),
                        degenerate: Vec::new(),
                        confusion: detect_core::metrics::ConfusionMatrix {
                            tp: 0,
                            tn: 0,
                            fp: 0,
                            fn_: 0,
                        },
                        auc: g("auc"),
                        roc: Vec::new(),
                    }
                }),
                train_seconds: None,
                eval_seconds: None,
            })
            .collect();
        print!("{}", render_table(&mean_rows));
    }
    println!("report: {}", out.join("report.json").display());
    Ok(())
}

pub fn predict(args: PredictArgs) -> Result<()> {
    let bundle = Bundle::load(&args.bundle)?;
    let texts: Vec<String> = match (&args.text, &args.input) {
        (Some(text), None) => vec![text.clone()],
        (None, Some(path)) => {
            let file = fs::File::open(path)?;
            std::io::BufReader::new(file)
                .lines()
                .collect::<std::io::Result<_>>()?
        }
        _ => {
            return Err(Error::DegenerateData(
                "provide exactly one of --text or --input".into(),
            ))
        }
    };

    for (index, text) in texts.iter().enumerate() {
        if text.trim().is_empty() {
            return Err(Error::EmptyText { row: index + 1 });
        }
        let prediction = bundle.predict_text(text);
        println!(
            "{}",
            json!({
                "text_id": index,
                "label": prediction.label,
                "score": prediction.score,
                "all_oov": prediction.all_oov,
            })
        );
    }
    Ok(())
}
