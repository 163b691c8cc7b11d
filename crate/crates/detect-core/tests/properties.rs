//! Randomized property checks for the contract invariants.

mod common;

use proptest::prelude::*;

use detect_core::corpus::{
    stratified_split, synthesize_corpus, undersample_balance, Document, Label, LabeledCorpus,
};
use detect_core::matrix::{SparseMatrix, SparseVector};
use detect_core::metrics::{auc, compute_metrics, roc_curve, ConfusionMatrix};
use detect_core::tree::{best_split, gini_impurity};
use detect_core::vectorizer::{fit_vectorizer, term_frequency, tokenize, VectorizerConfig};

fn corpus_from_counts(n_human: usize, n_chatgpt: usize) -> LabeledCorpus {
    let mut docs = Vec::new();
    for i in 0..n_human {
        docs.push((Document::new(format!("human doc number {i}")), Label::Human));
    }
    for i in 0..n_chatgpt {
        docs.push((
            Document::new(format!("chatgpt doc number {i}")),
            Label::ChatGPT,
        ));
    }
    LabeledCorpus::from_documents(docs)
}

proptest! {
    #[test]
    fn balance_equalizes_and_preserves_minority(
        n_human in 1usize..60,
        n_chatgpt in 1usize..60,
        seed in 0u64..500,
    ) {
        let corpus = corpus_from_counts(n_human, n_chatgpt);
        let balanced = undersample_balance(&corpus, seed).unwrap();
        let target = n_human.min(n_chatgpt);
        prop_assert_eq!(balanced.class_counts(), [target, target]);
        // Survivors are a subset of the originals in original order.
        let originals: Vec<String> =
            corpus.documents().iter().map(|(d, _)| d.text.clone()).collect();
        let mut cursor = 0;
        for (doc, _) in balanced.documents() {
            let pos = originals[cursor..].iter().position(|t| *t == doc.text);
            prop_assert!(pos.is_some(), "order violated at {}", doc.text);
            cursor += pos.unwrap() + 1;
        }
    }

    #[test]
    fn split_partitions_exactly(
        n_human in 2usize..50,
        n_chatgpt in 2usize..50,
        ratio in 0.2f64..0.8,
        seed in 0u64..500,
    ) {
        let corpus = corpus_from_counts(n_human, n_chatgpt);
        let Ok(split) = stratified_split(&corpus, ratio, seed) else {
            // Legal only when a class is too small for the ratio.
            let smallest = n_human.min(n_chatgpt);
            prop_assert!((ratio * smallest as f64).floor() < 1.0 || (ratio * smallest as f64) >= (smallest - 1) as f64);
            return Ok(());
        };
        prop_assert_eq!(split.train.len() + split.test.len(), corpus.len());
        // Multiset union equals the input, intersection empty.
        let mut seen: Vec<&str> = split
            .train
            .documents()
            .iter()
            .chain(split.test.documents())
            .map(|(d, _)| d.text.as_str())
            .collect();
        seen.sort_unstable();
        let mut expected: Vec<&str> =
            corpus.documents().iter().map(|(d, _)| d.text.as_str()).collect();
        expected.sort_unstable();
        prop_assert_eq!(seen, expected);
        // Stratification within one document per class.
        for label in Label::ALL {
            let total = corpus.count(label) as f64;
            let in_train = split.train.count(label) as f64;
            prop_assert!((in_train - ratio * total).abs() <= 1.0);
        }
    }

    #[test]
    fn split_deterministic(seed in 0u64..200) {
        let corpus = synthesize_corpus(12, seed);
        let a = stratified_split(&corpus, 0.75, seed).unwrap();
        let b = stratified_split(&corpus, 0.75, seed).unwrap();
        prop_assert_eq!(a.train.fingerprint(), b.train.fingerprint());
        prop_assert_eq!(a.test.fingerprint(), b.test.fingerprint());
    }

    #[test]
    fn tf_is_a_distribution(tokens in proptest::collection::vec("[a-e]{1,3}", 1..30)) {
        let text = tokens.join(" ");
        let stream = tokenize(&text);
        let mut unique = stream.clone();
        unique.sort();
        unique.dedup();
        let mut sum = 0.0;
        for term in &unique {
            let tf = term_frequency(term, &stream);
            prop_assert!((0.0..=1.0).contains(&tf));
            sum += tf;
        }
        prop_assert!((sum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn tfidf_weights_positive_and_train_only(
        doc_count in 2usize..6,
        seed in 0u64..300,
    ) {
        let words = ["alpha", "beta", "gamma", "delta", "epsilon"];
        let mut rng = detect_core::rng::XorShift64Star::new(seed);
        let texts: Vec<String> = (0..doc_count)
            .map(|_| {
                (0..1 + rng.gen_range(6))
                    .map(|_| words[rng.gen_range(words.len())])
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        let refs: Vec<&str> = texts.iter().map(String::as_str).collect();
        let model = fit_vectorizer(&refs, VectorizerConfig::default()).unwrap();
        let matrix = model.transform(&refs);
        for row in matrix.rows() {
            for &(_, w) in row.entries() {
                prop_assert!(w > 0.0, "stored zero or negative weight {w}");
            }
        }
        // Transforming unseen text leaves the model untouched.
        let before = serde_json::to_string(&model).unwrap();
        let _ = model.transform_one("zeta eta theta");
        prop_assert_eq!(before, serde_json::to_string(&model).unwrap());
    }

    #[test]
    fn gini_bounds_and_purity(c0 in 0usize..40, c1 in 0usize..40) {
        prop_assume!(c0 + c1 > 0);
        let g = gini_impurity(&[c0, c1]);
        prop_assert!((0.0..=0.5 + 1e-15).contains(&g));
        prop_assert_eq!(g == 0.0, c0 == 0 || c1 == 0);
    }

    #[test]
    fn split_never_worse_than_parent(
        values in proptest::collection::vec((0u8..4, 0usize..2), 2..10),
    ) {
        let labels: Vec<usize> = values.iter().map(|(_, l)| *l).collect();
        prop_assume!(labels.contains(&0) && labels.contains(&1));
        let rows: Vec<Vec<f64>> = values.iter().map(|(v, _)| vec![*v as f64 / 4.0]).collect();
        let matrix = SparseMatrix::new(
            rows.iter()
                .map(|r| SparseVector::from_pairs(vec![(0, r[0])]))
                .collect(),
            1,
        );
        let all: Vec<u32> = (0..rows.len() as u32).collect();
        let mut counts = [0usize; 2];
        for &l in &labels {
            counts[l] += 1;
        }
        if let Some(split) = best_split(&matrix, &labels, &all, &[0]) {
            prop_assert!(split.child_impurity <= gini_impurity(&counts) + 1e-12);
        }
    }

    #[test]
    fn metrics_ranges(
        tp in 0usize..30, tn in 0usize..30, fp in 0usize..30, fn_ in 0usize..30,
    ) {
        prop_assume!(tp + tn + fp + fn_ > 0);
        let m = compute_metrics(&ConfusionMatrix { tp, tn, fp, fn_ });
        for v in [m.accuracy, m.precision, m.recall, m.f1] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
        prop_assert!((-1.0..=1.0).contains(&m.mcc));
    }

    #[test]
    fn roc_matches_concordance(
        entries in proptest::collection::vec((0usize..2, 0u8..8), 2..40),
    ) {
        let y: Vec<Label> = entries.iter().map(|(l, _)| Label::from_index(*l)).collect();
        prop_assume!(y.contains(&Label::Human) && y.contains(&Label::ChatGPT));
        // Coarse score grid so score ties actually occur.
        let scores: Vec<f64> = entries.iter().map(|(_, s)| *s as f64 / 8.0).collect();
        let curve = roc_curve(&y, &scores).unwrap();
        for pair in curve.windows(2) {
            prop_assert!(pair[1].fpr >= pair[0].fpr);
            prop_assert!(pair[1].tpr >= pair[0].tpr);
        }
        let trapezoid = auc(&curve);
        let concordance = common::concordance_auc(&y, &scores);
        prop_assert!((trapezoid - concordance).abs() < 1e-9);
    }

    #[test]
    fn ensemble_vote_conservation(seed in 0u64..50) {
        let corpus = synthesize_corpus(15, seed);
        let model = fit_vectorizer(&corpus.texts(), VectorizerConfig::default()).unwrap();
        let x = model.transform(&corpus.texts());
        let y: Vec<usize> = corpus.labels().iter().map(|l| l.index()).collect();
        let forest = detect_core::ensemble::fit_extra_trees(&x, &y, 9, seed).unwrap();
        for proba in forest.predict_proba(&x) {
            // proba = chatgpt votes / 9; votes must be integral and the
            // complement must account for every tree.
            let votes = proba * 9.0;
            prop_assert!((votes - votes.round()).abs() < 1e-9);
            prop_assert!((0.0..=1.0).contains(&proba));
        }
    }
}
