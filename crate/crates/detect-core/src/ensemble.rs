//! Tree ensembles: Extremely Randomized Trees, Random Forest and Bagging,
//! all predicting by majority vote.
//!
//! Every tree is grown from its own seed, derived from the master seed and
//! the tree index, so the serialized ensemble is identical whether training
//! runs in parallel or not, and adding trees never disturbs earlier ones.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::matrix::SparseMatrix;
use crate::rng::{mix_seed, XorShift64Star};
use crate::tree::{grow_tree, MaxFeatures, SplitRule, TreeNode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleKind {
    ExtraTrees,
    RandomForest,
    Bagging,
}

impl EnsembleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EnsembleKind::ExtraTrees => "extra-trees",
            EnsembleKind::RandomForest => "random-forest",
            EnsembleKind::Bagging => "bagging",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleParams {
    pub n_trees: usize,
    pub max_features: MaxFeatures,
    pub bootstrap: bool,
    pub split_rule: SplitRule,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Ensemble {
    pub kind: EnsembleKind,
    #[serde(rename = "hyperparams")]
    pub params: EnsembleParams,
    pub trees: Vec<TreeNode>,
}

fn validate(x: &SparseMatrix, y: &[usize], n_trees: usize) -> Result<()> {
    if x.n_rows() == 0 {
        return Err(Error::DegenerateData("empty training set".into()));
    }
    if x.n_rows() != y.len() {
        return Err(Error::DegenerateData(
            "feature/label length mismatch".into(),
        ));
    }
    if n_trees == 0 {
        return Err(Error::DegenerateData("n_trees must be at least 1".into()));
    }
    Ok(())
}

/// Train one ensemble. `parallel` only changes scheduling: per-tree seeds
/// make the result identical either way.
pub fn fit_ensemble(
    kind: EnsembleKind,
    x: &SparseMatrix,
    y: &[usize],
    params: EnsembleParams,
    parallel: bool,
) -> Result<Ensemble> {
    validate(x, y, params.n_trees)?;
    let grow_one = |t: usize| -> TreeNode {
        let mut rng = XorShift64Star::new(mix_seed(params.seed, t as u64));
        let n = x.n_rows();
        let rows: Vec<u32> = if params.bootstrap {
            (0..n).map(|_| rng.gen_range(n) as u32).collect()
        } else {
            (0..n as u32).collect()
        };
        grow_tree(
            x,
            y,
            &rows,
            params.split_rule,
            params.max_features,
            &mut rng,
        )
    };
    let trees: Vec<TreeNode> = if parallel {
        (0..params.n_trees).into_par_iter().map(grow_one).collect()
    } else {
        (0..params.n_trees).map(grow_one).collect()
    };
    Ok(Ensemble {
        kind,
        params,
        trees,
    })
}

/// Extremely Randomized Trees: random split points over feature subsets of
/// size `ceil(sqrt(V))`, each tree trained on the whole dataset (no
/// bootstrap), 50 trees by default.
pub fn fit_extra_trees(
    x: &SparseMatrix,
    y: &[usize],
    n_trees: usize,
    seed: u64,
) -> Result<Ensemble> {
    fit_ensemble(
        EnsembleKind::ExtraTrees,
        x,
        y,
        EnsembleParams {
            n_trees,
            max_features: MaxFeatures::Sqrt,
            bootstrap: false,
            split_rule: SplitRule::Random,
            seed,
        },
        true,
    )
}

/// Random Forest: best splits over `ceil(sqrt(V))` feature subsets with a
/// bootstrap resample per tree, 100 trees by default.
pub fn fit_random_forest(
    x: &SparseMatrix,
    y: &[usize],
    n_trees: usize,
    seed: u64,
) -> Result<Ensemble> {
    fit_ensemble(
        EnsembleKind::RandomForest,
        x,
        y,
        EnsembleParams {
            n_trees,
            max_features: MaxFeatures::Sqrt,
            bootstrap: true,
            split_rule: SplitRule::Best,
            seed,
        },
        true,
    )
}

/// Bagging: full decision trees (best splits, all features) over bootstrap
/// resamples, 10 trees by default.
pub fn fit_bagging(x: &SparseMatrix, y: &[usize], n_trees: usize, seed: u64) -> Result<Ensemble> {
    fit_ensemble(
        EnsembleKind::Bagging,
        x,
        y,
        EnsembleParams {
            n_trees,
            max_features: MaxFeatures::All,
            bootstrap: true,
            split_rule: SplitRule::Best,
            seed,
        },
        true,
    )
}

pub const DEFAULT_EXTRA_TREES: usize = 50;
pub const DEFAULT_RANDOM_FOREST_TREES: usize = 100;
pub const DEFAULT_BAGGING_TREES: usize = 10;

impl Ensemble {
    /// Fraction of trees voting ChatGPT for each row.
    pub fn predict_proba(&self, x: &SparseMatrix) -> Vec<f64> {
        x.rows()
            .iter()
            .map(|row| {
                let votes = self
                    .trees
                    .iter()
                    .filter(|t| t.vote(row) == Label::ChatGPT)
                    .count();
                votes as f64 / self.trees.len() as f64
            })
            .collect()
    }

    /// Majority vote per row; an exact tie goes to Human.
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

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    /// Parse a serialized ensemble. Unpruned trees can nest deeper than
    /// serde_json's default recursion limit, so the limit is lifted here.
    pub fn from_json(json: &str) -> Result<Ensemble> {
        crate::from_json_deep(json)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::SparseVector;

    fn two_cluster_data(n_per_class: usize) -> (SparseMatrix, Vec<usize>) {
        // Class 0 near x=0, class 1 near x=1, a little deterministic jitter.
        let mut rows = Vec::new();
        let mut y = Vec::new();
        for i in 0..n_per_class {
            let jitter = (i % 7) as f64 * 0.01;
            rows.push(SparseVector::from_pairs(vec![
                (0, 0.1 + jitter),
                (1, 1.0 - jitter),
            ]));
            y.push(0);
            rows.push(SparseVector::from_pairs(vec![
                (0, 0.9 - jitter),
                (1, jitter),
            ]));
            y.push(1);
        }
        (SparseMatrix::new(rows, 2), y)
    }

    #[test]
    fn extra_trees_default_count() {
        let (x, y) = two_cluster_data(10);
        let model = fit_extra_trees(&x, &y, DEFAULT_EXTRA_TREES, 42).unwrap();
        assert_eq!(model.trees.len(), 50);
        assert_eq!(model.kind, EnsembleKind::ExtraTrees);
        assert!(!model.params.bootstrap);
    }

    #[test]
    fn extra_trees_singleton() {
        let (x, y) = two_cluster_data(5);
        let model = fit_extra_trees(&x, &y, 1, 0).unwrap();
        assert_eq!(model.trees.len(), 1);
        let proba = model.predict_proba(&x);
        assert!(proba.iter().all(|p| *p == 0.0 || *p == 1.0));
    }

    #[test]
    fn extra_trees_deterministic_across_scheduling() {
        let (x, y) = two_cluster_data(8);
        let params = EnsembleParams {
            n_trees: 16,
            max_features: MaxFeatures::Sqrt,
            bootstrap: false,
            split_rule: SplitRule::Random,
            seed: 42,
        };
        let serial = fit_ensemble(EnsembleKind::ExtraTrees, &x, &y, params, false).unwrap();
        let parallel = fit_ensemble(EnsembleKind::ExtraTrees, &x, &y, params, true).unwrap();
        assert_eq!(serial.to_json().unwrap(), parallel.to_json().unwrap());
    }

    #[test]
    fn random_forest_bootstrap_distinct_fraction() {
        // With N draws with replacement the expected distinct fraction is
        // 1 - (1 - 1/N)^N ~= 0.632; check the seeded draw lands near it.
        let n = 1000usize;
        let mut rng = XorShift64Star::new(mix_seed(7, 0));
        let mut seen = vec![false; n];
        for _ in 0..n {
            seen[rng.gen_range(n)] = true;
        }
        let distinct = seen.iter().filter(|&&s| s).count() as f64 / n as f64;
        assert!(
            (0.57..0.70).contains(&distinct),
            "distinct fraction {distinct}"
        );
    }

    #[test]
    fn random_forest_pure_labels_all_leaves() {
        let (x, _) = two_cluster_data(5);
        let y = vec![1; x.n_rows()];
        let model = fit_random_forest(&x, &y, 5, 3).unwrap();
        for tree in &model.trees {
            assert_eq!(tree.n_leaves(), 1);
        }
        assert!(model.predict(&x).iter().all(|l| *l == Label::ChatGPT));
    }

    #[test]
    fn random_forest_deterministic() {
        let (x, y) = two_cluster_data(6);
        let a = fit_random_forest(&x, &y, 12, 5).unwrap();
        let b = fit_random_forest(&x, &y, 12, 5).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    }

    #[test]
    fn bagging_defaults_and_training_fit() {
        let (x, y) = two_cluster_data(6);
        let model = fit_bagging(&x, &y, DEFAULT_BAGGING_TREES, 11).unwrap();
        assert_eq!(model.trees.len(), 10);
        // Bootstrapped full trees still classify this separable set.
        let predictions = model.predict(&x);
        let correct = predictions
            .iter()
            .zip(&y)
            .filter(|(p, l)| p.index() == **l)
            .count();
        assert_eq!(correct, x.n_rows());
    }

    #[test]
    fn bagging_differs_from_forest_only_in_feature_subsets() {
        let (x, y) = two_cluster_data(3);
        let bag = fit_bagging(&x, &y, 4, 9).unwrap();
        let forest = fit_random_forest(&x, &y, 4, 9).unwrap();
        assert_eq!(bag.params.bootstrap, forest.params.bootstrap);
        assert_eq!(bag.params.split_rule, forest.params.split_rule);
        assert_ne!(bag.params.max_features, forest.params.max_features);
    }

    #[test]
    fn vote_counting() {
        // 3 of 4 leaf-trees vote ChatGPT -> proba 0.75, label ChatGPT.
        let make_leaf = |counts: [usize; 2]| TreeNode::Leaf { counts };
        let ensemble = Ensemble {
            kind: EnsembleKind::ExtraTrees,
            params: EnsembleParams {
                n_trees: 4,
                max_features: MaxFeatures::Sqrt,
                bootstrap: false,
                split_rule: SplitRule::Random,
                seed: 0,
            },
            trees: vec![
                make_leaf([0, 1]),
                make_leaf([0, 1]),
                make_leaf([0, 1]),
                make_leaf([1, 0]),
            ],
        };
        let x = SparseMatrix::new(vec![SparseVector::new()], 0);
        assert_eq!(ensemble.predict_proba(&x), vec![0.75]);
        assert_eq!(ensemble.predict(&x), vec![Label::ChatGPT]);
    }

    #[test]
    fn tie_goes_to_human() {
        let make_leaf = |counts: [usize; 2]| TreeNode::Leaf { counts };
        let ensemble = Ensemble {
            kind: EnsembleKind::Bagging,
            params: EnsembleParams {
                n_trees: 2,
                max_features: MaxFeatures::All,
                bootstrap: true,
                split_rule: SplitRule::Best,
                seed: 0,
            },
            trees: vec![make_leaf([0, 1]), make_leaf([1, 0])],
        };
        let x = SparseMatrix::new(vec![SparseVector::new()], 0);
        assert_eq!(ensemble.predict_proba(&x), vec![0.5]);
        assert_eq!(ensemble.predict(&x), vec![Label::Human]);
    }

    #[test]
    fn json_round_trip_preserves_predictions() {
        let (x, y) = two_cluster_data(6);
        let model = fit_extra_trees(&x, &y, 8, 21).unwrap();
        let json = model.to_json().unwrap();
        let back = Ensemble::from_json(&json).unwrap();
        assert_eq!(back.to_json().unwrap(), json);
        assert_eq!(back.predict_proba(&x), model.predict_proba(&x));
    }

    #[test]
    fn degenerate_inputs_error() {
        let x = SparseMatrix::new(vec![], 0);
        assert!(fit_extra_trees(&x, &[], 10, 0).is_err());
        let (x, y) = two_cluster_data(2);
        assert!(fit_extra_trees(&x, &y[..2], 10, 0).is_err());
        assert!(fit_extra_trees(&x, &y, 0, 0).is_err());
    }
}
