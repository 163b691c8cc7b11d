//! Independent oracles for the acceptance suite. Everything here is a
//! deliberately naive re-derivation from first principles — brute-force
//! counting, exhaustive enumeration, pairwise concordance — kept separate
//! from the library code paths it checks.

#![allow(dead_code)]

use detect_core::corpus::Label;

/// The five scalar metrics recomputed by direct per-sample counting.
/// Zero-denominator metrics read 0, matching the declared convention.
pub struct NaiveMetrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub mcc: f64,
}

pub fn naive_metrics(y_true: &[usize], y_pred: &[usize]) -> NaiveMetrics {
    let mut tp = 0.0;
    let mut tn = 0.0;
    let mut fp = 0.0;
    let mut fn_ = 0.0;
    for (&t, &p) in y_true.iter().zip(y_pred) {
        match (t, p) {
            (1, 1) => tp += 1.0,
            (0, 0) => tn += 1.0,
            (0, 1) => fp += 1.0,
            (1, 0) => fn_ += 1.0,
            _ => unreachable!("binary labels only"),
        }
    }
    let div = |num: f64, den: f64| if den == 0.0 { 0.0 } else { num / den };
    let accuracy = div(tp + tn, tp + tn + fp + fn_);
    let precision = div(tp, tp + fp);
    let recall = div(tp, tp + fn_);
    let f1 = div(2.0 * precision * recall, precision + recall);
    let mcc = div(
        tp * tn - fp * fn_,
        ((tp + fp) * (tp + fn_) * (tn + fp) * (tn + fn_)).sqrt(),
    );
    NaiveMetrics {
        accuracy,
        precision,
        recall,
        f1,
        mcc,
    }
}

/// Dense TF-IDF evaluation straight from the defining formulas: relative
/// term frequency times `ln(N / df)` over the training corpus.
pub fn naive_tfidf(
    train_docs: &[Vec<&str>],
    target_docs: &[Vec<&str>],
    vocab: &[&str],
) -> Vec<Vec<f64>> {
    let n = train_docs.len() as f64;
    let df: Vec<f64> = vocab
        .iter()
        .map(|term| train_docs.iter().filter(|d| d.contains(term)).count() as f64)
        .collect();
    target_docs
        .iter()
        .map(|doc| {
            vocab
                .iter()
                .zip(&df)
                .map(|(term, &df_t)| {
                    if df_t == 0.0 || doc.is_empty() {
                        return 0.0;
                    }
                    let count = doc.iter().filter(|t| *t == term).count() as f64;
                    let tf = count / doc.len() as f64;
                    tf * (n / df_t).ln()
                })
                .collect()
        })
        .collect()
}

/// Exhaustively enumerated best split over dense rows: every feature,
/// every midpoint of consecutive distinct sorted values, weighted child
/// gini by direct counting. Ties break toward lower feature then lower
/// threshold.
pub struct OracleSplit {
    pub feature: usize,
    pub threshold: f64,
    pub child_impurity: f64,
}

pub fn exhaustive_best_split(rows: &[Vec<f64>], labels: &[usize]) -> Option<OracleSplit> {
    let n_features = rows.first().map_or(0, |r| r.len());
    // The defining formula, written in its canonical shape so that exact
    // real-arithmetic ties stay ties in floating point.
    let gini = |counts: [f64; 2]| -> f64 {
        let total = counts[0] + counts[1];
        if total == 0.0 {
            return 0.0;
        }
        let p0 = counts[0] / total;
        let p1 = counts[1] / total;
        1.0 - (p0 * p0 + p1 * p1)
    };
    let mut best: Option<OracleSplit> = None;
    for feature in 0..n_features {
        let mut values: Vec<f64> = rows.iter().map(|r| r[feature]).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        for pair in values.windows(2) {
            let threshold = (pair[0] + pair[1]) / 2.0;
            let mut left = [0.0; 2];
            let mut right = [0.0; 2];
            for (row, &label) in rows.iter().zip(labels) {
                if row[feature] <= threshold {
                    left[label] += 1.0;
                } else {
                    right[label] += 1.0;
                }
            }
            let nl = left[0] + left[1];
            let nr = right[0] + right[1];
            let impurity = (nl * gini(left) + nr * gini(right)) / (nl + nr);
            let replace = match &best {
                None => true,
                Some(b) => {
                    impurity < b.child_impurity
                        || (impurity == b.child_impurity
                            && (feature, threshold) < (b.feature, b.threshold))
                }
            };
            if replace {
                best = Some(OracleSplit {
                    feature,
                    threshold,
                    child_impurity: impurity,
                });
            }
        }
    }
    best
}

/// AUC as the concordance-pair estimate: the fraction of
/// (positive, negative) pairs ranked correctly, ties counting one half.
pub fn concordance_auc(y_true: &[Label], scores: &[f64]) -> f64 {
    let mut concordant = 0.0;
    let mut pairs = 0.0;
    for (i, &ti) in y_true.iter().enumerate() {
        if ti != Label::ChatGPT {
            continue;
        }
        for (j, &tj) in y_true.iter().enumerate() {
            if tj != Label::Human {
                continue;
            }
            pairs += 1.0;
            if scores[i] > scores[j] {
                concordant += 1.0;
            } else if scores[i] == scores[j] {
                concordant += 0.5;
            }
        }
    }
    concordant / pairs
}
