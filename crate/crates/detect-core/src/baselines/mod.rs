//! Comparative classifiers implemented from scratch: logistic regression,
//! k-nearest neighbors and AdaBoost over decision stumps.

pub mod adaboost;
pub mod knn;
pub mod logistic;

pub use adaboost::{adaboost_predict, adaboost_scores, fit_adaboost, BoostedModel, BoostedStump};
pub use knn::{fit_knn, knn_predict, knn_predict_proba, KnnModel};
pub use logistic::{fit_logistic_regression, predict_logistic, LinearModel, LogisticConfig};
