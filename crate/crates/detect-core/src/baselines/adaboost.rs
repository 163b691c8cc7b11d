//! Discrete AdaBoost over depth-1 decision stumps.
//!
//! Labels live in {-1, +1} (Human = -1, ChatGPT = +1). Each round fits the
//! stump minimizing the weighted classification error, with each side of
//! the split labeled by its weighted majority. A round whose weighted error
//! reaches 0.5 stops training before adding the stump; an error of zero is
//! clipped to 1e-10 for the alpha computation and stops training after the
//! stump is kept, since nothing is left to reweight.

use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::matrix::{ColumnStore, SparseMatrix, SparseVector};

pub const DEFAULT_ADABOOST_ROUNDS: usize = 50;

const ERR_EPSILON: f64 = 1e-10;

/// One weighted stump: route left iff `value <= threshold`, predict the
/// side's label in {-1, +1}, weighted by `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoostedStump {
    pub feature: usize,
    pub threshold: f64,
    pub left_label: i8,
    pub right_label: i8,
    pub alpha: f64,
}

impl BoostedStump {
    fn predict(&self, row: &SparseVector) -> i8 {
        if row.get(self.feature) <= self.threshold {
            self.left_label
        } else {
            self.right_label
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoostedModel {
    pub stumps: Vec<BoostedStump>,
    pub n_rounds: usize,
}

/// Candidate stump before weighting: split position plus per-side labels
/// and its weighted error.
struct StumpCandidate {
    error: f64,
    feature: usize,
    threshold: f64,
    left_label: i8,
    right_label: i8,
}

fn midpoint(lo: f64, hi: f64) -> f64 {
    let mid = lo + (hi - lo) / 2.0;
    if mid >= hi {
        lo
    } else {
        mid
    }
}

/// Weighted-majority label of a side; ties go Human (-1).
fn majority(counts: &[f64; 2]) -> (i8, f64) {
    if counts[1] > counts[0] {
        (1, counts[0])
    } else {
        (-1, counts[1])
    }
}

/// Exhaustive weighted stump search over every feature, thresholds at
/// midpoints of consecutive distinct values (the implicit 0 of rows missing
/// a feature included). Ties break toward lower feature then lower
/// threshold. `None` when no feature varies.
fn best_stump(
    store: &ColumnStore,
    x: &SparseMatrix,
    y: &[usize],
    weights: &[f64],
) -> Option<StumpCandidate> {
    let n = x.n_rows();
    // Row stamps mark which rows appear in the current column so the
    // implicit-zero group can be summed directly (no subtraction: exact
    // prefix/suffix sums keep tie-breaking faithful to exact arithmetic).
    let mut stamp = vec![usize::MAX; n];

    let mut best: Option<StumpCandidate> = None;
    for feature in 0..store.n_cols() {
        let col = store.column(feature);

        // Distinct-value groups with per-class weight sums, ascending.
        let mut groups: Vec<(f64, [f64; 2])> = Vec::new();
        for &(value, row) in col {
            match groups.last_mut() {
                Some((v, sums)) if *v == value => sums[y[row as usize]] += weights[row as usize],
                _ => {
                    let mut sums = [0.0; 2];
                    sums[y[row as usize]] += weights[row as usize];
                    groups.push((value, sums));
                }
            }
        }
        if col.len() < n {
            for &(_, row) in col {
                stamp[row as usize] = feature;
            }
            let mut zero_sums = [0.0f64; 2];
            for i in 0..n {
                if stamp[i] != feature {
                    zero_sums[y[i]] += weights[i];
                }
            }
            let position = groups.partition_point(|(v, _)| *v < 0.0);
            groups.insert(position, (0.0, zero_sums));
        }
        if groups.len() < 2 {
            continue;
        }

        // Suffix class sums so the right side is a pure sum too.
        let mut suffix = vec![[0.0f64; 2]; groups.len() + 1];
        for (i, (_, sums)) in groups.iter().enumerate().rev() {
            suffix[i] = [suffix[i + 1][0] + sums[0], suffix[i + 1][1] + sums[1]];
        }

        let mut left = [0.0f64; 2];
        for (i, pair) in groups.windows(2).enumerate() {
            left[0] += pair[0].1[0];
            left[1] += pair[0].1[1];
            let threshold = midpoint(pair[0].0, pair[1].0);
            let right = suffix[i + 1];
            let (left_label, left_err) = majority(&left);
            let (right_label, right_err) = majority(&right);
            let error = left_err + right_err;
            let better = match &best {
                None => true,
                Some(b) => {
                    error < b.error
                        || (error == b.error && (feature, threshold) < (b.feature, b.threshold))
                }
            };
            if better {
                best = Some(StumpCandidate {
                    error,
                    feature,
                    threshold,
                    left_label,
                    right_label,
                });
            }
        }
    }
    best
}

/// Boosting loop; also returns the sample-weight vector after every round
/// so tests can check the reweighting against a hand trace.
fn boost(
    x: &SparseMatrix,
    y: &[usize],
    n_rounds: usize,
) -> Result<(Vec<BoostedStump>, Vec<Vec<f64>>)> {
    let n = x.n_rows();
    if n == 0 {
        return Err(Error::DegenerateData("empty training set".into()));
    }
    if n != y.len() {
        return Err(Error::DegenerateData(
            "feature/label length mismatch".into(),
        ));
    }
    if !y.contains(&0) || !y.contains(&1) {
        return Err(Error::DegenerateData(
            "adaboost requires both classes".into(),
        ));
    }
    let store = ColumnStore::build(x);
    let signed: Vec<f64> = y.iter().map(|&c| if c == 1 { 1.0 } else { -1.0 }).collect();

    let mut weights = vec![1.0 / n as f64; n];
    let mut stumps = Vec::new();
    let mut history = Vec::new();
    for _ in 0..n_rounds {
        let Some(candidate) = best_stump(&store, x, y, &weights) else {
            break;
        };
        if candidate.error >= 0.5 {
            break;
        }
        let clipped = candidate.error.max(ERR_EPSILON);
        let alpha = 0.5 * ((1.0 - clipped) / clipped).ln();
        let stump = BoostedStump {
            feature: candidate.feature,
            threshold: candidate.threshold,
            left_label: candidate.left_label,
            right_label: candidate.right_label,
            alpha,
        };

        let mut z = 0.0;
        for i in 0..n {
            let h = stump.predict(x.row(i)) as f64;
            weights[i] *= (-alpha * signed[i] * h).exp();
            z += weights[i];
        }
        for w in &mut weights {
            *w /= z;
        }
        history.push(weights.clone());
        stumps.push(stump);
        if candidate.error <= ERR_EPSILON {
            break;
        }
    }
    if stumps.is_empty() {
        return Err(Error::DegenerateData(
            "no informative feature for any stump".into(),
        ));
    }
    Ok((stumps, history))
}

pub fn fit_adaboost(x: &SparseMatrix, y: &[usize], n_rounds: usize) -> Result<BoostedModel> {
    let (stumps, _) = boost(x, y, n_rounds)?;
    Ok(BoostedModel { stumps, n_rounds })
}

impl BoostedModel {
    /// Weighted vote margin, normalized to [-1, 1].
    pub fn margin(&self, row: &SparseVector) -> f64 {
        let alpha_sum: f64 = self.stumps.iter().map(|s| s.alpha).sum();
        let vote: f64 = self
            .stumps
            .iter()
            .map(|s| s.alpha * s.predict(row) as f64)
            .sum();
        vote / alpha_sum
    }

    /// Margin mapped to a [0, 1] score; 0.5 is the decision boundary.
    pub fn score(&self, row: &SparseVector) -> f64 {
        0.5 * (self.margin(row) + 1.0)
    }
}

/// Labels per row: sign of the weighted stump vote, a zero sign reading as
/// Human.
pub fn adaboost_predict(model: &BoostedModel, x: &SparseMatrix) -> Vec<Label> {
    x.rows()
        .iter()
        .map(|row| {
            if model.margin(row) > 0.0 {
                Label::ChatGPT
            } else {
                Label::Human
            }
        })
        .collect()
}

/// Positive-class scores per row.
pub fn adaboost_scores(model: &BoostedModel, x: &SparseMatrix) -> Vec<f64> {
    x.rows().iter().map(|row| model.score(row)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn column_matrix(values: &[f64]) -> SparseMatrix {
        let rows = values
            .iter()
            .map(|&v| SparseVector::from_pairs(vec![(0, v)]))
            .collect();
        SparseMatrix::new(rows, 1)
    }

    #[test]
    fn perfectly_separable_stops_after_one_round() {
        let x = column_matrix(&[1.0, 2.0, 5.0, 6.0]);
        let y = vec![0, 0, 1, 1];
        let model = fit_adaboost(&x, &y, 50).unwrap();
        assert_eq!(model.stumps.len(), 1, "err=0 round must stop training");
        let alpha = model.stumps[0].alpha;
        assert!(alpha > 10.0, "alpha should be large, got {alpha}");
        let predicted = adaboost_predict(&model, &x);
        let correct = predicted
            .iter()
            .zip(&y)
            .filter(|(p, l)| p.index() == **l)
            .count();
        assert_eq!(correct, 4);
    }

    #[test]
    fn single_round_equals_best_stump() {
        let x = column_matrix(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let y = vec![0, 0, 1, 0, 1, 1];
        let model = fit_adaboost(&x, &y, 1).unwrap();
        assert_eq!(model.stumps.len(), 1);
        // Hand enumeration: threshold 2.5 and 4.5 tie at error 1/6; the
        // lower threshold wins.
        assert!((model.stumps[0].threshold - 2.5).abs() < 1e-12);
        assert_eq!(model.stumps[0].left_label, -1);
        assert_eq!(model.stumps[0].right_label, 1);
    }

    #[test]
    fn three_round_weight_trace_matches_hand_simulation() {
        // The classic 6-point fixture: minus, minus, plus, minus, plus, plus.
        let x = column_matrix(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let y = vec![0, 0, 1, 0, 1, 1];
        let (stumps, history) = boost(&x, &y, 3).unwrap();
        assert_eq!(stumps.len(), 3);

        // Round 1: stump at 2.5, err 1/6, alpha = ln(5)/2; the one mistake
        // (sample 4) climbs to weight 1/2, the rest drop to 1/10.
        assert!((stumps[0].threshold - 2.5).abs() < 1e-12);
        assert!((stumps[0].alpha - 0.5 * 5.0f64.ln()).abs() < 1e-12);
        let expected1 = [0.1, 0.1, 0.1, 0.5, 0.1, 0.1];
        for (w, e) in history[0].iter().zip(expected1) {
            assert!((w - e).abs() < 1e-9, "round 1 weights {:?}", history[0]);
        }

        // Round 2: stump at 4.5, err 0.1, alpha = ln(9)/2 = ln 3; sample 3
        // becomes the hard one at 1/2, sample 4 keeps 5/18.
        assert!((stumps[1].threshold - 4.5).abs() < 1e-12);
        assert!((stumps[1].alpha - 3.0f64.ln()).abs() < 1e-12);
        let expected2 = [
            1.0 / 18.0,
            1.0 / 18.0,
            0.5,
            5.0 / 18.0,
            1.0 / 18.0,
            1.0 / 18.0,
        ];
        for (w, e) in history[1].iter().zip(expected2) {
            assert!((w - e).abs() < 1e-9, "round 2 weights {:?}", history[1]);
        }

        // Round 3: stump at 3.5 with inverted side labels, err 2/9.
        assert!((stumps[2].threshold - 3.5).abs() < 1e-12);
        assert_eq!((stumps[2].left_label, stumps[2].right_label), (1, -1));
        assert!((stumps[2].alpha - 0.5 * 3.5f64.ln()).abs() < 1e-12);

        // The boosted ensemble now classifies everything correctly.
        let model = BoostedModel {
            stumps,
            n_rounds: 3,
        };
        let predicted = adaboost_predict(&model, &x);
        let correct = predicted
            .iter()
            .zip(&y)
            .filter(|(p, l)| p.index() == **l)
            .count();
        assert_eq!(correct, 6);
    }

    #[test]
    fn weights_stay_a_distribution() {
        let x = column_matrix(&[0.5, 1.5, 2.0, 3.5, 4.0, 5.5, 6.0, 7.5]);
        let y = vec![0, 1, 0, 1, 0, 1, 0, 1];
        let (_, history) = boost(&x, &y, 10).unwrap();
        for weights in &history {
            let sum: f64 = weights.iter().sum();
            assert!((sum - 1.0).abs() < 1e-9);
            assert!(weights.iter().all(|w| *w >= 0.0));
        }
    }

    #[test]
    fn training_error_non_increasing_on_separable_fixture() {
        let x = column_matrix(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let y = vec![0, 0, 1, 0, 1, 1];
        let mut previous_errors = usize::MAX;
        for rounds in 1..=3 {
            let model = fit_adaboost(&x, &y, rounds).unwrap();
            let predicted = adaboost_predict(&model, &x);
            let errors = predicted
                .iter()
                .zip(&y)
                .filter(|(p, l)| p.index() != **l)
                .count();
            assert!(errors <= previous_errors);
            previous_errors = errors;
        }
        assert_eq!(previous_errors, 0);
    }

    #[test]
    fn stump_search_sees_implicit_zeros() {
        // Row 1 lacks the feature; a stump between 0 and 1 separates.
        let x = SparseMatrix::new(
            vec![
                SparseVector::from_pairs(vec![(0, 1.0)]),
                SparseVector::new(),
            ],
            1,
        );
        let y = vec![1, 0];
        let model = fit_adaboost(&x, &y, 5).unwrap();
        assert!((model.stumps[0].threshold - 0.5).abs() < 1e-12);
        assert_eq!(
            adaboost_predict(&model, &x),
            vec![Label::ChatGPT, Label::Human]
        );
    }

    #[test]
    fn single_class_errors() {
        let x = column_matrix(&[1.0, 2.0]);
        assert!(fit_adaboost(&x, &[1, 1], 5).is_err());
    }

    #[test]
    fn constant_features_error() {
        let x = column_matrix(&[2.0, 2.0, 2.0]);
        let y = vec![0, 1, 0];
        assert!(matches!(
            fit_adaboost(&x, &y, 5),
            Err(Error::DegenerateData(_))
        ));
    }

    #[test]
    fn zero_margin_reads_human() {
        let model = BoostedModel {
            stumps: vec![
                BoostedStump {
                    feature: 0,
                    threshold: 0.5,
                    left_label: -1,
                    right_label: 1,
                    alpha: 1.0,
                },
                BoostedStump {
                    feature: 0,
                    threshold: 0.5,
                    left_label: 1,
                    right_label: -1,
                    alpha: 1.0,
                },
            ],
            n_rounds: 2,
        };
        let x = column_matrix(&[0.2]);
        assert_eq!(adaboost_predict(&model, &x), vec![Label::Human]);
        assert_eq!(adaboost_scores(&model, &x), vec![0.5]);
    }

    #[test]
    fn model_json_round_trip() {
        let x = column_matrix(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let y = vec![0, 0, 1, 0, 1, 1];
        let model = fit_adaboost(&x, &y, 3).unwrap();
        let json = serde_json::to_string(&model).unwrap();
        assert!(json.contains("left_label"));
        let back: BoostedModel = serde_json::from_str(&json).unwrap();
        assert_eq!(back.stumps, model.stumps);
    }
}
