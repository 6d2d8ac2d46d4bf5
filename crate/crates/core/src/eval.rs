//! Word-level scoring of predicted transcripts against labels.

use crate::merge::normalized_distance;
use crate::recognize::{Charset, WordImage};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

/// Minimum crop height kept by the dataset filters.
pub const MIN_CROP_HEIGHT: u32 = 20;
/// Minimum label length kept by the dataset filters.
pub const MIN_LABEL_CHARS: usize = 3;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("crops and labels differ in length ({crops} vs {labels})")]
    LengthMismatch { crops: usize, labels: usize },
    #[error("ground truth io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("ground truth parse error: {0}")]
    Parse(#[from] serde_json::Error),
}

/// Bag of words with occurrence counts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WordMultiset(BTreeMap<String, u32>);

impl WordMultiset {
    pub fn insert(&mut self, word: String) {
        *self.0.entry(word).or_insert(0) += 1;
    }

    pub fn count(&self, word: &str) -> u32 {
        self.0.get(word).copied().unwrap_or(0)
    }

    /// Total number of word occurrences.
    pub fn total(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u32)> {
        self.0.iter().map(|(w, &c)| (w.as_str(), c))
    }
}

impl<S: Into<String>> FromIterator<S> for WordMultiset {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        let mut set = WordMultiset::default();
        for w in iter {
            set.insert(w.into());
        }
        set
    }
}

/// Split on whitespace, lowercase, restrict to the charset and trim
/// punctuation from token edges. `drop_short` additionally removes tokens
/// shorter than three characters (the dataset-filter rule).
pub fn tokenize_words(text: &str, charset: &Charset, drop_short: bool) -> WordMultiset {
    text.split_whitespace()
        .filter_map(|raw| {
            let cleaned = charset.sanitize(raw);
            let trimmed = cleaned
                .trim_matches(|c: char| !c.is_alphanumeric())
                .to_string();
            if trimmed.is_empty() || (drop_short && trimmed.chars().count() < MIN_LABEL_CHARS) {
                None
            } else {
                Some(trimmed)
            }
        })
        .collect()
}

/// Size of the multiset intersection: sum of per-word minimum counts.
pub fn multiset_intersection(labels: &WordMultiset, preds: &WordMultiset) -> u32 {
    labels
        .iter()
        .map(|(word, count)| count.min(preds.count(word)))
        .sum()
}

/// Word-level precision/recall/F1 plus text-level similarity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub similarity: f64,
    pub labels_total: u32,
    pub predictions_total: u32,
    pub intersection: u32,
}

impl EvalReport {
    /// Report from pooled counts plus the texts used for similarity.
    pub fn from_counts(
        labels_total: u32,
        predictions_total: u32,
        intersection: u32,
        label_text: &str,
        pred_text: &str,
    ) -> Self {
        let (precision, recall) = if labels_total == 0 && predictions_total == 0 {
            (1.0, 1.0)
        } else {
            let p = if predictions_total == 0 {
                0.0
            } else {
                intersection as f64 / predictions_total as f64
            };
            let r = if labels_total == 0 {
                0.0
            } else {
                intersection as f64 / labels_total as f64
            };
            (p, r)
        };
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * recall * precision / (recall + precision)
        };
        let similarity = 1.0 - normalized_distance(label_text, pred_text);
        EvalReport {
            precision,
            recall,
            f1,
            similarity,
            labels_total,
            predictions_total,
            intersection,
        }
    }
}

/// Score one (labels, predictions) pair.
///
/// Conventions at the formulas' undefined points: no predictions scores
/// precision 0, no labels scores recall 0, and the empty-vs-empty case
/// scores 1 everywhere.
pub fn score(
    labels: &WordMultiset,
    preds: &WordMultiset,
    label_text: &str,
    pred_text: &str,
) -> EvalReport {
    EvalReport::from_counts(
        labels.total(),
        preds.total(),
        multiset_intersection(labels, preds),
        label_text,
        pred_text,
    )
}

/// Drop (crop, label) pairs failing the dataset filters: crop height below
/// 20px or label shorter than 3 characters.
pub fn apply_dataset_filters(
    crops: Vec<WordImage>,
    labels: Vec<String>,
) -> Result<Vec<(WordImage, String)>, EvalError> {
    if crops.len() != labels.len() {
        return Err(EvalError::LengthMismatch {
            crops: crops.len(),
            labels: labels.len(),
        });
    }
    Ok(crops
        .into_iter()
        .zip(labels)
        .filter(|(crop, label)| {
            crop.image.height() >= MIN_CROP_HEIGHT && label.chars().count() >= MIN_LABEL_CHARS
        })
        .collect())
}

/// One annotated word box of a ground-truth frame.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GtBox {
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
    pub text: String,
}

/// Ground truth for one frame: every word shown, with its location.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameGroundTruth {
    pub frame_index: u32,
    pub boxes: Vec<GtBox>,
}

/// Load a ground-truth file: a JSON array of per-frame records.
pub fn load_ground_truth(path: &Path) -> Result<Vec<FrameGroundTruth>, EvalError> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}
