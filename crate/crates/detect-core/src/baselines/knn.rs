//! K-nearest-neighbors over L2-normalized TF-IDF rows. Euclidean distance
//! on unit vectors orders neighbors exactly like cosine distance.

use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::matrix::{SparseMatrix, SparseVector};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KnnModel {
    pub k: usize,
    rows: Vec<SparseVector>,
    labels: Vec<usize>,
}

/// Store the training rows L2-normalized. `k` must be an odd positive
/// integer so majority votes cannot tie.
pub fn fit_knn(x: &SparseMatrix, y: &[usize], k: usize) -> Result<KnnModel> {
    if x.n_rows() == 0 {
        return Err(Error::DegenerateData("empty training set".into()));
    }
    if x.n_rows() != y.len() {
        return Err(Error::DegenerateData(
            "feature/label length mismatch".into(),
        ));
    }
    if k == 0 || k.is_multiple_of(2) {
        return Err(Error::InvalidK(k));
    }
    Ok(KnnModel {
        k,
        rows: x.rows().iter().map(SparseVector::normalized).collect(),
        labels: y.to_vec(),
    })
}

impl KnnModel {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Effective neighbor count: `k` clamped to the training size and kept
    /// odd (a training set of one forces k = 1).
    fn effective_k(&self) -> usize {
        let mut k = self.k.min(self.rows.len());
        if k.is_multiple_of(2) {
            k -= 1;
        }
        k.max(1)
    }

    /// Indices of the k nearest training rows; distance ties break toward
    /// the lower training index.
    fn nearest(&self, query: &SparseVector) -> Vec<usize> {
        let q = query.normalized();
        let mut distances: Vec<(f64, usize)> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| (q.squared_distance(row), i))
            .collect();
        distances.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        distances.truncate(self.effective_k());
        distances.into_iter().map(|(_, i)| i).collect()
    }
}

/// Fraction of the k nearest neighbors labeled ChatGPT.
pub fn knn_predict_proba(model: &KnnModel, query: &SparseVector) -> f64 {
    let nearest = model.nearest(query);
    let positive = nearest.iter().filter(|&&i| model.labels[i] == 1).count();
    positive as f64 / nearest.len() as f64
}

/// Majority label of the k nearest neighbors.
pub fn knn_predict(model: &KnnModel, query: &SparseVector) -> Label {
    if knn_predict_proba(model, query) > 0.5 {
        Label::ChatGPT
    } else {
        Label::Human
    }
}
