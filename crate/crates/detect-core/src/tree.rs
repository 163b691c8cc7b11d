//! Decision tree induction: gini impurity, best and random splits, and
//! unpruned tree growth.
//!
//! Trees are grown without any depth limit or pruning: a node stops only
//! when it is pure, has a single sample, or no candidate feature separates
//! it. Absent sparse features read as 0 both for routing and for threshold
//! candidates.

use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::matrix::SparseMatrix;
use crate::rng::XorShift64Star;

/// Gini impurity `1 - sum(p_c^2)` of a binary class count pair.
///
/// Panics on an empty node.
pub fn gini_impurity(class_counts: &[usize; 2]) -> f64 {
    let total = class_counts[0] + class_counts[1];
    assert!(total > 0, "gini_impurity on an empty node");
    let total = total as f64;
    let p0 = class_counts[0] as f64 / total;
    let p1 = class_counts[1] as f64 / total;
    1.0 - (p0 * p0 + p1 * p1)
}

/// How many candidate features each node draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaxFeatures {
    /// Every feature; used by the standalone decision tree and bagging.
    All,
    /// `ceil(sqrt(V))` features, the ensemble convention.
    Sqrt,
}

impl MaxFeatures {
    pub fn count(self, n_features: usize) -> usize {
        match self {
            MaxFeatures::All => n_features,
            MaxFeatures::Sqrt => (n_features as f64).sqrt().ceil() as usize,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitRule {
    /// Exhaustive midpoint search minimizing weighted child gini.
    Best,
    /// One uniform threshold per varying feature, then pick the lowest
    /// weighted child gini among them.
    Random,
}

/// A chosen split: route left iff `value <= threshold`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Split {
    pub feature: usize,
    pub threshold: f64,
    /// Count-weighted mean gini of the two children.
    pub child_impurity: f64,
}

/// A trained tree node. Leaves keep the training class counts so votes and
/// probability estimates can be read off directly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TreeNode {
    Internal {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Leaf {
        counts: [usize; 2],
    },
}

impl TreeNode {
    /// Leaf class counts for one sample, following `value <= threshold`
    /// routing with absent features read as 0.
    pub fn leaf_counts(&self, row: &crate::matrix::SparseVector) -> &[usize; 2] {
        let mut node = self;
        loop {
            match node {
                TreeNode::Leaf { counts } => return counts,
                TreeNode::Internal {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if row.get(*feature) <= *threshold {
                        left
                    } else {
                        right
                    };
                }
            }
        }
    }

    /// Majority vote of the reached leaf; ties go to class 0 (Human).
    pub fn vote(&self, row: &crate::matrix::SparseVector) -> Label {
        let counts = self.leaf_counts(row);
        if counts[1] > counts[0] {
            Label::ChatGPT
        } else {
            Label::Human
        }
    }

    /// Fraction of positive-class samples in the reached leaf.
    pub fn leaf_fraction(&self, row: &crate::matrix::SparseVector) -> f64 {
        let counts = self.leaf_counts(row);
        counts[1] as f64 / (counts[0] + counts[1]) as f64
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Internal { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn n_leaves(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Internal { left, right, .. } => left.n_leaves() + right.n_leaves(),
        }
    }
}

fn label_counts(y: &[usize], rows: &[u32]) -> [usize; 2] {
    let mut counts = [0usize; 2];
    for &r in rows {
        counts[y[r as usize]] += 1;
    }
    counts
}

/// Midpoint of two consecutive distinct values. When rounding would land
/// the midpoint on the upper value (adjacent floats), fall back to the lower
/// value so `<= threshold` still separates the two groups.
fn midpoint(lo: f64, hi: f64) -> f64 {
    let mid = lo + (hi - lo) / 2.0;
    if mid >= hi {
        lo
    } else {
        mid
    }
}

/// Weighted child gini of a candidate threshold over (value, label) pairs.
fn threshold_impurity(values: &[(f64, usize)], threshold: f64) -> f64 {
    let mut left = [0usize; 2];
    let mut right = [0usize; 2];
    for &(v, label) in values {
        if v <= threshold {
            left[label] += 1;
        } else {
            right[label] += 1;
        }
    }
    let (nl, nr) = (left[0] + left[1], right[0] + right[1]);
    let n = (nl + nr) as f64;
    (nl as f64 * gini_impurity(&left) + nr as f64 * gini_impurity(&right)) / n
}

/// Gather the node's values for one feature as (value, label) pairs.
fn gather(x: &SparseMatrix, y: &[usize], rows: &[u32], feature: usize) -> Vec<(f64, usize)> {
    rows.iter()
        .map(|&r| (x.row(r as usize).get(feature), y[r as usize]))
        .collect()
}

/// Exhaustive best split over the candidate features.
///
/// Thresholds sit at midpoints of consecutive distinct sorted values (the
/// implicit 0 of sparse columns included whenever a sample lacks the
/// feature). Ties break toward the lower feature index then lower
/// threshold. `None` when no candidate feature varies over the node.
pub fn best_split(
    x: &SparseMatrix,
    y: &[usize],
    rows: &[u32],
    features: &[usize],
) -> Option<Split> {
    if rows.len() < 2 {
        return None;
    }
    let mut best: Option<Split> = None;
    for &feature in features {
        let mut values = gather(x, y, rows, feature);
        values.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));

        let total = label_counts(y, rows);
        let n = rows.len() as f64;
        let mut left = [0usize; 2];
        for k in 0..values.len() - 1 {
            left[values[k].1] += 1;
            if values[k].0 == values[k + 1].0 {
                continue;
            }
            let threshold = midpoint(values[k].0, values[k + 1].0);
            let right = [total[0] - left[0], total[1] - left[1]];
            let nl = (k + 1) as f64;
            let nr = n - nl;
            let impurity = (nl * gini_impurity(&left) + nr * gini_impurity(&right)) / n;
            let candidate = Split {
                feature,
                threshold,
                child_impurity: impurity,
            };
            let better = match &best {
                None => true,
                Some(b) => {
                    impurity < b.child_impurity
                        || (impurity == b.child_impurity
                            && (feature, threshold) < (b.feature, b.threshold))
                }
            };
            if better {
                best = Some(candidate);
            }
        }
    }
    best
}

/// One uniform threshold per varying candidate feature, then the lowest
/// weighted child gini wins. Thresholds are drawn strictly inside
/// (min, max), consuming the generator in candidate order. `None` when no
/// candidate feature varies.
pub fn random_split(
    x: &SparseMatrix,
    y: &[usize],
    rows: &[u32],
    features: &[usize],
    rng: &mut XorShift64Star,
) -> Option<Split> {
    if rows.len() < 2 {
        return None;
    }
    let mut best: Option<Split> = None;
    for &feature in features {
        let values = gather(x, y, rows, feature);
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for &(v, _) in &values {
            min = min.min(v);
            max = max.max(v);
        }
        if min >= max {
            continue;
        }
        let threshold = rng.gen_open_range(min, max);
        let impurity = threshold_impurity(&values, threshold);
        let candidate = Split {
            feature,
            threshold,
            child_impurity: impurity,
        };
        let better = match &best {
            None => true,
            Some(b) => {
                impurity < b.child_impurity
                    || (impurity == b.child_impurity
                        && (feature, threshold) < (b.feature, b.threshold))
            }
        };
        if better {
            best = Some(candidate);
        }
    }
    best
}

/// Grow an unpruned tree over the given sample rows (repeats allowed, as
/// under bootstrap). Each node draws a fresh random candidate feature
/// subset; `MaxFeatures::All` keeps natural feature order and draws nothing.
pub fn grow_tree(
    x: &SparseMatrix,
    y: &[usize],
    rows: &[u32],
    split_rule: SplitRule,
    max_features: MaxFeatures,
    rng: &mut XorShift64Star,
) -> TreeNode {
    assert!(!rows.is_empty(), "grow_tree on empty input");
    let counts = label_counts(y, rows);
    if counts[0] == 0 || counts[1] == 0 || rows.len() == 1 {
        return TreeNode::Leaf { counts };
    }

    let n_features = x.n_cols();
    if n_features == 0 {
        return TreeNode::Leaf { counts };
    }
    let features: Vec<usize> = match max_features {
        MaxFeatures::All => (0..n_features).collect(),
        MaxFeatures::Sqrt => {
            let k = max_features.count(n_features).clamp(1, n_features);
            rng.sample_indices(n_features, k)
        }
    };

    let split = match split_rule {
        SplitRule::Best => best_split(x, y, rows, &features),
        SplitRule::Random => random_split(x, y, rows, &features, rng),
    };
    let Some(split) = split else {
        return TreeNode::Leaf { counts };
    };

    let mut left_rows = Vec::new();
    let mut right_rows = Vec::new();
    for &r in rows {
        if x.row(r as usize).get(split.feature) <= split.threshold {
            left_rows.push(r);
        } else {
            right_rows.push(r);
        }
    }
    debug_assert!(!left_rows.is_empty() && !right_rows.is_empty());

    TreeNode::Internal {
        feature: split.feature,
        threshold: split.threshold,
        left: Box::new(grow_tree(x, y, &left_rows, split_rule, max_features, rng)),
        right: Box::new(grow_tree(x, y, &right_rows, split_rule, max_features, rng)),
    }
}

/// A standalone unpruned CART-style decision tree (best splits, all
/// features, full training set).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecisionTree {
    pub tree: TreeNode,
    pub seed: u64,
}

pub fn fit_decision_tree(x: &SparseMatrix, y: &[usize], seed: u64) -> Result<DecisionTree> {
    if x.n_rows() == 0 {
        return Err(Error::DegenerateData("empty training set".into()));
    }
    if x.n_rows() != y.len() {
        return Err(Error::DegenerateData(
            "feature/label length mismatch".into(),
        ));
    }
    let rows: Vec<u32> = (0..x.n_rows() as u32).collect();
    let mut rng = XorShift64Star::new(seed);
    let tree = grow_tree(x, y, &rows, SplitRule::Best, MaxFeatures::All, &mut rng);
    Ok(DecisionTree { tree, seed })
}

impl DecisionTree {
    /// Positive-class probability per row, read from leaf class fractions
    /// (pure on conflict-free training data).
    pub fn predict_proba(&self, x: &SparseMatrix) -> Vec<f64> {
        x.rows()
            .iter()
            .map(|r| self.tree.leaf_fraction(r))
            .collect()
    }
}
