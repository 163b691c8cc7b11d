//! Labeled text corpora: loading, balancing, encoding and splitting.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{mix_seed, XorShift64Star};

/// Binary provenance label. ChatGPT is the positive class everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Human = 0,
    ChatGPT = 1,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::Human, Label::ChatGPT];

    /// The one-hot / binary encoding of the class: 0 or 1.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Label {
        match index {
            0 => Label::Human,
            1 => Label::ChatGPT,
            _ => panic!("label index {index} out of range"),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Human => "human",
            Label::ChatGPT => "chatgpt",
        }
    }
}

/// One raw text with an optional opaque provenance id.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Document {
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_id: Option<String>,
}

impl Document {
    pub fn new(text: impl Into<String>) -> Self {
        Self {
            text: text.into(),
            source_id: None,
        }
    }
}

/// An ordered list of labeled documents with cached per-class counts.
#[derive(Debug, Clone, Default)]
pub struct LabeledCorpus {
    documents: Vec<(Document, Label)>,
    class_counts: [usize; 2],
}

/// Printable corpus summary for reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub n_total: usize,
    pub n_human: usize,
    pub n_chatgpt: usize,
}

impl LabeledCorpus {
    pub fn from_documents(documents: Vec<(Document, Label)>) -> Self {
        let mut class_counts = [0usize; 2];
        for (_, label) in &documents {
            class_counts[label.index()] += 1;
        }
        Self {
            documents,
            class_counts,
        }
    }

    pub fn documents(&self) -> &[(Document, Label)] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn count(&self, label: Label) -> usize {
        self.class_counts[label.index()]
    }

    pub fn class_counts(&self) -> [usize; 2] {
        self.class_counts
    }

    pub fn labels(&self) -> Vec<Label> {
        self.documents.iter().map(|(_, l)| *l).collect()
    }

    pub fn texts(&self) -> Vec<&str> {
        self.documents
            .iter()
            .map(|(d, _)| d.text.as_str())
            .collect()
    }

    pub fn summary(&self) -> CorpusSummary {
        CorpusSummary {
            n_total: self.len(),
            n_human: self.count(Label::Human),
            n_chatgpt: self.count(Label::ChatGPT),
        }
    }

    /// Order-sensitive FNV-1a hash of every (text, label) pair, as hex.
    /// Used by the train/test leak guard in the CLI.
    pub fn fingerprint(&self) -> String {
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |byte: u8| {
            hash ^= byte as u64;
            hash = hash.wrapping_mul(0x100_0000_01b3);
        };
        for (doc, label) in &self.documents {
            for b in doc.text.as_bytes() {
                eat(*b);
            }
            eat(0xff);
            eat(label.index() as u8);
            eat(0xfe);
        }
        format!("{hash:016x}")
    }

    /// Write as a two-column RFC 4180 CSV with a `text,label` header.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut writer = csv::Writer::from_path(path)?;
        writer.write_record(["text", "label"])?;
        for (doc, label) in &self.documents {
            writer.write_record([doc.text.as_str(), label.as_str()])?;
        }
        writer.flush()?;
        Ok(())
    }
}

/// Disjoint train/test partition of a corpus.
#[derive(Debug, Clone)]
pub struct SplitCorpus {
    pub train: LabeledCorpus,
    pub test: LabeledCorpus,
    pub seed: u64,
    pub ratio: f64,
}

/// Load a labeled corpus from a CSV file with a header row.
///
/// Every distinct value of `label_column` must appear in `label_mapping`;
/// anything else is an error naming the offending line. Texts that are empty
/// after trimming are rejected the same way. Row order is preserved.
pub fn load_csv(
    path: impl AsRef<Path>,
    text_column: &str,
    label_column: &str,
    label_mapping: &HashMap<String, Label>,
) -> Result<LabeledCorpus> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)?;
    let headers = reader.headers()?.clone();
    let find = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    };
    let text_idx = find(text_column)?;
    let label_idx = find(label_column)?;

    let mut documents = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        let text = record.get(text_idx).unwrap_or("");
        let raw_label = record.get(label_idx).unwrap_or("");
        let label = label_mapping
            .get(raw_label)
            .copied()
            .ok_or_else(|| Error::UnmappedLabel {
                row: line,
                value: raw_label.to_string(),
            })?;
        if text.trim().is_empty() {
            return Err(Error::EmptyText { row: line });
        }
        documents.push((Document::new(text), label));
    }
    Ok(LabeledCorpus::from_documents(documents))
}

/// The default label mapping accepted by the CLI: `human`/`0` and
/// `chatgpt`/`1`.
pub fn default_label_mapping() -> HashMap<String, Label> {
    let mut map = HashMap::new();
    map.insert("human".to_string(), Label::Human);
    map.insert("0".to_string(), Label::Human);
    map.insert("chatgpt".to_string(), Label::ChatGPT);
    map.insert("1".to_string(), Label::ChatGPT);
    map
}

/// Discard majority-class documents until both classes have `min(counts)`
/// documents. Survivors are chosen uniformly by the seeded generator and
/// keep their relative order; the minority class is untouched.
pub fn undersample_balance(corpus: &LabeledCorpus, seed: u64) -> Result<LabeledCorpus> {
    let counts = corpus.class_counts();
    if counts[0] == 0 || counts[1] == 0 {
        return Err(Error::SingleClass);
    }
    if counts[0] == counts[1] {
        return Ok(corpus.clone());
    }
    let majority = if counts[0] > counts[1] {
        Label::Human
    } else {
        Label::ChatGPT
    };
    let target = counts[0].min(counts[1]);

    let majority_positions: Vec<usize> = corpus
        .documents()
        .iter()
        .enumerate()
        .filter(|(_, (_, l))| *l == majority)
        .map(|(i, _)| i)
        .collect();
    let mut rng = XorShift64Star::new(seed);
    let chosen = rng.sample_indices(majority_positions.len(), target);
    let mut keep = vec![false; corpus.len()];
    for (i, (_, label)) in corpus.documents().iter().enumerate() {
        if *label != majority {
            keep[i] = true;
        }
    }
    for j in chosen {
        keep[majority_positions[j]] = true;
    }

    let documents = corpus
        .documents()
        .iter()
        .enumerate()
        .filter(|(i, _)| keep[*i])
        .map(|(_, pair)| pair.clone())
        .collect();
    Ok(LabeledCorpus::from_documents(documents))
}

/// Stratified train/test split.
///
/// Each class is shuffled with a seed derived from `(seed, class)` and a
/// prefix of `floor(ratio * class_count)` documents goes to train. When the
/// per-class floors fall short of the global target `floor(ratio * n)`, the
/// remaining slot goes to the class with the larger fractional remainder
/// (tie: Human), so the overall train size always equals the global floor.
/// Document order inside each half follows the input corpus.
pub fn stratified_split(corpus: &LabeledCorpus, ratio: f64, seed: u64) -> Result<SplitCorpus> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::RatioOutOfRange(ratio));
    }
    let counts = corpus.class_counts();
    if counts[0] == 0 || counts[1] == 0 {
        return Err(Error::SingleClass);
    }

    let mut train_counts = [0usize; 2];
    let mut remainders = [0.0f64; 2];
    for label in Label::ALL {
        let n = counts[label.index()] as f64;
        let exact = ratio * n;
        train_counts[label.index()] = exact.floor() as usize;
        remainders[label.index()] = exact - exact.floor();
    }
    let global_target = (ratio * corpus.len() as f64).floor() as usize;
    if train_counts[0] + train_counts[1] < global_target {
        // One leftover slot at most with two classes.
        let prefer = if remainders[1] > remainders[0] { 1 } else { 0 };
        let other = 1 - prefer;
        if train_counts[prefer] < counts[prefer]
            && (counts[prefer] == 1 || train_counts[prefer] + 1 < counts[prefer])
        {
            train_counts[prefer] += 1;
        } else if train_counts[other] < counts[other]
            && (counts[other] == 1 || train_counts[other] + 1 < counts[other])
        {
            train_counts[other] += 1;
        }
    }
    for label in Label::ALL {
        let n = counts[label.index()];
        let t = train_counts[label.index()];
        if n >= 2 && (t == 0 || t == n) {
            return Err(Error::ClassTooSmall {
                class: label.as_str(),
                count: n,
            });
        }
    }

    let mut to_train = vec![false; corpus.len()];
    for label in Label::ALL {
        let positions: Vec<usize> = corpus
            .documents()
            .iter()
            .enumerate()
            .filter(|(_, (_, l))| *l == label)
            .map(|(i, _)| i)
            .collect();
        let mut shuffled = positions.clone();
        let mut rng = XorShift64Star::new(mix_seed(seed, label.index() as u64));
        rng.shuffle(&mut shuffled);
        for &pos in shuffled.iter().take(train_counts[label.index()]) {
            to_train[pos] = true;
        }
    }

    let mut train = Vec::new();
    let mut test = Vec::new();
    for (i, pair) in corpus.documents().iter().enumerate() {
        if to_train[i] {
            train.push(pair.clone());
        } else {
            test.push(pair.clone());
        }
    }
    Ok(SplitCorpus {
        train: LabeledCorpus::from_documents(train),
        test: LabeledCorpus::from_documents(test),
        seed,
        ratio,
    })
}

const HUMAN_MARKERS: [&str; 16] = [
    "reckon", "gossip", "yeah", "folks", "grumble", "honestly", "chuckle", "shrug", "kinda",
    "messy", "awkward", "banter", "quirky", "rant", "nifty", "oops",
];

const CHATGPT_MARKERS: [&str; 16] = [
    "furthermore",
    "moreover",
    "comprehensive",
    "leverage",
    "utilize",
    "paradigm",
    "robust",
    "seamless",
    "holistic",
    "insights",
    "facilitate",
    "optimal",
    "framework",
    "stakeholders",
    "innovative",
    "methodology",
];

const FILLER_WORDS: [&str; 24] = [
    "the", "a", "of", "to", "and", "in", "that", "it", "is", "was", "for", "on", "with", "as",
    "at", "by", "this", "from", "they", "we", "have", "one", "about", "time",
];

/// Marker vocabularies used by [`synthesize_corpus`], exposed so demos can
/// hint which words drive each class.
pub fn synthetic_markers() -> (&'static [&'static str], &'static [&'static str]) {
    (&HUMAN_MARKERS, &CHATGPT_MARKERS)
}

/// Generate a separable two-class fixture corpus: each document mixes shared
/// filler words with markers drawn only from its own class vocabulary.
/// Deterministic in `seed`.
pub fn synthesize_corpus(n_per_class: usize, seed: u64) -> LabeledCorpus {
    assert!(n_per_class >= 1, "n_per_class must be at least 1");
    let mut rng = XorShift64Star::new(seed);
    let mut documents = Vec::with_capacity(2 * n_per_class);
    for i in 0..2 * n_per_class {
        let label = if i % 2 == 0 {
            Label::Human
        } else {
            Label::ChatGPT
        };
        let markers: &[&str] = match label {
            Label::Human => &HUMAN_MARKERS,
            Label::ChatGPT => &CHATGPT_MARKERS,
        };
        let len = 40 + rng.gen_range(41);
        let mut words = Vec::with_capacity(len);
        for _ in 0..len {
            if rng.next_f64() < 0.3 {
                words.push(markers[rng.gen_range(markers.len())]);
            } else {
                words.push(FILLER_WORDS[rng.gen_range(FILLER_WORDS.len())]);
            }
        }
        let mut doc = Document::new(words.join(" "));
        doc.source_id = Some(format!("synth-{}-{}", label.as_str(), i / 2));
        documents.push((doc, label));
    }
    LabeledCorpus::from_documents(documents)
}
