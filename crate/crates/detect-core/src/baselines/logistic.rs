//! L2-regularized logistic regression trained by full-batch gradient
//! descent from a zero initialization.

use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::matrix::{SparseMatrix, SparseVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2: f64,
    pub seed: u64,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            epochs: 300,
            l2: 1e-4,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub config: LogisticConfig,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Mean cross-entropy loss with an L2 penalty on the weights (bias
/// unpenalized), together with its gradient. Exposed so the gradient can be
/// checked against finite differences.
pub fn loss_and_gradient(
    weights: &[f64],
    bias: f64,
    x: &SparseMatrix,
    y: &[usize],
    l2: f64,
) -> (f64, Vec<f64>, f64) {
    let n = x.n_rows() as f64;
    let mut loss = 0.0;
    let mut grad_w = vec![0.0; weights.len()];
    let mut grad_b = 0.0;
    for (row, &label) in x.rows().iter().zip(y) {
        let z = bias
            + row
                .entries()
                .iter()
                .map(|&(c, v)| weights[c] * v)
                .sum::<f64>();
        // -[y ln p + (1-y) ln(1-p)] = softplus(z) - y z
        loss += softplus(z) - label as f64 * z;
        let err = sigmoid(z) - label as f64;
        for &(c, v) in row.entries() {
            grad_w[c] += err * v;
        }
        grad_b += err;
    }
    loss /= n;
    grad_b /= n;
    let mut penalty = 0.0;
    for (g, w) in grad_w.iter_mut().zip(weights) {
        *g = *g / n + l2 * w;
        penalty += w * w;
    }
    loss += 0.5 * l2 * penalty;
    (loss, grad_w, grad_b)
}

/// Gradient descent with zero-initialized weights and early stop when an
/// epoch improves the loss by less than 1e-6.
pub fn fit_logistic_regression(
    x: &SparseMatrix,
    y: &[usize],
    config: LogisticConfig,
) -> Result<LinearModel> {
    if x.n_rows() == 0 {
        return Err(Error::DegenerateData("empty training set".into()));
    }
    if x.n_rows() != y.len() {
        return Err(Error::DegenerateData(
            "feature/label length mismatch".into(),
        ));
    }
    let mut weights = vec![0.0; x.n_cols()];
    let mut bias = 0.0;
    let mut previous_loss = f64::INFINITY;
    for _ in 0..config.epochs {
        let (loss, grad_w, grad_b) = loss_and_gradient(&weights, bias, x, y, config.l2);
        if !loss.is_finite() {
            return Err(Error::NonFiniteLoss);
        }
        if previous_loss - loss < 1e-6 {
            break;
        }
        previous_loss = loss;
        for (w, g) in weights.iter_mut().zip(&grad_w) {
            *w -= config.learning_rate * g;
        }
        bias -= config.learning_rate * grad_b;
    }
    Ok(LinearModel {
        weights,
        bias,
        config,
    })
}

impl LinearModel {
    pub fn proba_one(&self, row: &SparseVector) -> f64 {
        let z = self.bias
            + row
                .entries()
                .iter()
                .map(|&(c, v)| self.weights.get(c).copied().unwrap_or(0.0) * v)
                .sum::<f64>();
        sigmoid(z)
    }
}

/// Positive-class probability `sigmoid(w . x + b)` per row.
pub fn predict_logistic(model: &LinearModel, x: &SparseMatrix) -> Vec<f64> {
    x.rows().iter().map(|r| model.proba_one(r)).collect()
}

/// Hard labels from probabilities: ChatGPT iff p > 0.5, a tie goes Human.
pub fn logistic_labels(model: &LinearModel, x: &SparseMatrix) -> Vec<Label> {
    predict_logistic(model, x)
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
