//! Confusion-matrix metrics (accuracy, precision, recall, F1, MCC) and
//! ROC/AUC. ChatGPT is the positive class throughout.

use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};

/// TP/TN/FP/FN counts; positive class = ChatGPT.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub tn: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.tp + self.tn + self.fp + self.fn_
    }
}

/// Count a confusion matrix from aligned truth/prediction slices.
///
/// Panics on empty or mismatched inputs.
pub fn confusion(y_true: &[Label], y_pred: &[Label]) -> ConfusionMatrix {
    assert!(!y_true.is_empty(), "confusion on empty input");
    assert_eq!(y_true.len(), y_pred.len(), "confusion length mismatch");
    let mut cm = ConfusionMatrix {
        tp: 0,
        tn: 0,
        fp: 0,
        fn_: 0,
    };
    for (&t, &p) in y_true.iter().zip(y_pred) {
        match (t, p) {
            (Label::ChatGPT, Label::ChatGPT) => cm.tp += 1,
            (Label::Human, Label::Human) => cm.tn += 1,
            (Label::Human, Label::ChatGPT) => cm.fp += 1,
            (Label::ChatGPT, Label::Human) => cm.fn_ += 1,
        }
    }
    cm
}

/// The five scalar metrics. A metric whose denominator is zero is reported
/// as 0 and named in `degenerate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoreMetrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub mcc: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub degenerate: Vec<String>,
}

/// Evaluate accuracy, precision, recall, F1 and MCC from counts.
pub fn compute_metrics(cm: &ConfusionMatrix) -> CoreMetrics {
    assert!(
        cm.total() > 0,
        "compute_metrics on an empty confusion matrix"
    );
    let (tp, tn, fp, fn_) = (cm.tp as f64, cm.tn as f64, cm.fp as f64, cm.fn_ as f64);
    let mut degenerate = Vec::new();
    let mut ratio = |name: &str, num: f64, den: f64| -> f64 {
        if den == 0.0 {
            degenerate.push(name.to_string());
            0.0
        } else {
            num / den
        }
    };

    let accuracy = ratio("accuracy", tp + tn, tp + tn + fp + fn_);
    let precision = ratio("precision", tp, tp + fp);
    let recall = ratio("recall", tp, tp + fn_);
    let f1 = ratio("f1", 2.0 * precision * recall, precision + recall);
    let mcc_den = ((tp + fp) * (tp + fn_) * (tn + fp) * (tn + fn_)).sqrt();
    let mcc = ratio("mcc", tp * tn - fp * fn_, mcc_den);

    CoreMetrics {
        accuracy,
        precision,
        recall,
        f1,
        mcc,
        degenerate,
    }
}

/// One ROC point. `threshold` is the lowest score still classified
/// positive (predict positive iff `score >= threshold`); `None` marks the
/// (0, 0) sentinel above every score.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub fpr: f64,
    pub tpr: f64,
    pub threshold: Option<f64>,
}

/// ROC curve over descending distinct score thresholds. Tied scores
/// collapse into one point; the curve always starts at (0,0) and ends at
/// (1,1). Errors if y_true holds a single class.
pub fn roc_curve(y_true: &[Label], scores: &[f64]) -> Result<Vec<RocPoint>> {
    assert_eq!(y_true.len(), scores.len(), "roc_curve length mismatch");
    assert!(
        scores.iter().all(|s| s.is_finite()),
        "roc_curve requires finite scores"
    );
    let n_pos = y_true.iter().filter(|l| **l == Label::ChatGPT).count();
    let n_neg = y_true.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClassTruth);
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_unstable_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut points = vec![RocPoint {
        fpr: 0.0,
        tpr: 0.0,
        threshold: None,
    }];
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut i = 0;
    while i < order.len() {
        let score = scores[order[i]];
        while i < order.len() && scores[order[i]] == score {
            match y_true[order[i]] {
                Label::ChatGPT => tp += 1,
                Label::Human => fp += 1,
            }
            i += 1;
        }
        points.push(RocPoint {
            fpr: fp as f64 / n_neg as f64,
            tpr: tp as f64 / n_pos as f64,
            threshold: Some(score),
        });
    }
    Ok(points)
}

/// Trapezoidal area under an ROC curve.
pub fn auc(points: &[RocPoint]) -> f64 {
    points
        .windows(2)
        .map(|w| (w[1].fpr - w[0].fpr) * (w[1].tpr + w[0].tpr) / 2.0)
        .sum()
}

/// Full evaluation report: scalar metrics plus the ROC curve and its area.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub mcc: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub degenerate: Vec<String>,
    pub confusion: ConfusionMatrix,
    pub auc: f64,
    pub roc: Vec<RocPoint>,
}

/// Build a report from truth and positive-class scores. Predictions use
/// `score > 0.5` (a tie goes to Human), matching every classifier's own
/// decision rule.
pub fn evaluate_scores(y_true: &[Label], scores: &[f64]) -> Result<MetricsReport> {
    let y_pred: Vec<Label> = scores
        .iter()
        .map(|&s| {
            if s > 0.5 {
                Label::ChatGPT
            } else {
                Label::Human
            }
        })
        .collect();
    let cm = confusion(y_true, &y_pred);
    let core = compute_metrics(&cm);
    let roc = roc_curve(y_true, scores)?;
    let auc = auc(&roc);
    Ok(MetricsReport {
        accuracy: core.accuracy,
        precision: core.precision,
        recall: core.recall,
        f1: core.f1,
        mcc: core.mcc,
        degenerate: core.degenerate,
        confusion: cm,
        auc,
        roc,
    })
}
