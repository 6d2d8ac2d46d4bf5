//! Collapsing overlapping overlay texts across frames and dictionary-based
//! autocorrection of the survivors.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::path::Path;

/// Default normalized-distance threshold below which two overlays are
/// considered the same gradually-appearing text.
pub const DEFAULT_MERGE_THRESHOLD: f64 = 0.5;

/// Default maximum edit distance for dictionary autocorrection.
pub const DEFAULT_AUTOCORRECT_DISTANCE: u32 = 1;

/// Recognized text of one frame with its presentation time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimedOverlay {
    pub text: String,
    pub timestamp: f64,
    pub frame_index: u32,
}

/// Minimum number of single-character insertions, deletions and
/// substitutions transforming `a` into `b`.
pub fn levenshtein(a: &str, b: &str) -> u32 {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len() as u32;
    }
    if b.is_empty() {
        return a.len() as u32;
    }

    let mut row: Vec<u32> = (0..=b.len() as u32).collect();
    for (i, &ca) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i as u32 + 1;
        for (j, &cb) in b.iter().enumerate() {
            let sub = diag + u32::from(ca != cb);
            diag = row[j + 1];
            row[j + 1] = sub.min(diag + 1).min(row[j] + 1);
        }
    }
    row[b.len()]
}

/// Edit distance divided by the longer string's character count, in [0, 1].
/// Two empty strings are defined to have distance 0.
pub fn normalized_distance(a: &str, b: &str) -> f64 {
    let longest = a.chars().count().max(b.chars().count());
    if longest == 0 {
        return 0.0;
    }
    levenshtein(a, b) as f64 / longest as f64
}

/// Collapse overlays whose texts overlap across consecutive frames.
///
/// Overlays are ordered by timestamp descending and each consecutive pair of
/// that ordering is compared with `normalized_distance`; when the distance is
/// below `threshold` the overlay with fewer characters is dropped (the
/// earlier one on a tie). Pair comparisons always use the original reverse
/// ordering, regardless of prior drops. Survivors come back in ascending
/// time order.
pub fn merge_overlays(overlays: &[TimedOverlay], threshold: f64) -> Vec<TimedOverlay> {
    assert!(
        threshold > 0.0 && threshold <= 1.0,
        "merge threshold must be in (0, 1]"
    );
    if overlays.is_empty() {
        return Vec::new();
    }

    let mut reversed: Vec<&TimedOverlay> = overlays.iter().collect();
    reversed.sort_by(|a, b| {
        b.timestamp
            .total_cmp(&a.timestamp)
            .then(b.frame_index.cmp(&a.frame_index))
    });

    let mut dropped = vec![false; reversed.len()];
    for i in 0..reversed.len() - 1 {
        let later = reversed[i];
        let earlier = reversed[i + 1];
        if normalized_distance(&later.text, &earlier.text) < threshold {
            if later.text.chars().count() < earlier.text.chars().count() {
                dropped[i] = true;
            } else {
                dropped[i + 1] = true;
            }
        }
    }

    let mut kept: Vec<TimedOverlay> = reversed
        .iter()
        .zip(&dropped)
        .filter(|(_, &d)| !d)
        .map(|(o, _)| (*o).clone())
        .collect();
    kept.reverse();
    kept
}

/// Set of valid words used for autocorrection, lowercase and unique.
#[derive(Debug, Clone, Default)]
pub struct Dictionary(BTreeSet<String>);

impl Dictionary {
    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Dictionary(
            words
                .into_iter()
                .map(|w| w.as_ref().trim().to_lowercase())
                .filter(|w| !w.is_empty())
                .collect(),
        )
    }

    /// Load from a UTF-8 file with one word per line.
    pub fn load(path: &Path) -> std::io::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(Self::from_words(text.lines()))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|s| s.as_str())
    }
}

/// Replace each unknown word with the unique dictionary word within
/// `max_dist` edits, when one exists.
///
/// Words already in the dictionary, tokens without any letter (digits or
/// punctuation only) and words with zero or several nearest candidates stay
/// unchanged. Whitespace collapses to single spaces.
pub fn autocorrect(text: &str, dict: &Dictionary, max_dist: u32) -> String {
    let corrected: Vec<String> = text
        .split_whitespace()
        .map(|word| {
            if dict.contains(word) || !word.chars().any(|c| c.is_alphabetic()) {
                return word.to_string();
            }
            let mut best = u32::MAX;
            let mut candidate: Option<&str> = None;
            let mut unique = false;
            for entry in dict.words() {
                let d = levenshtein(word, entry);
                if d < best {
                    best = d;
                    candidate = Some(entry);
                    unique = true;
                } else if d == best {
                    unique = false;
                }
            }
            match candidate {
                Some(c) if unique && best <= max_dist => c.to_string(),
                _ => word.to_string(),
            }
        })
        .collect();
    corrected.join(" ")
}
