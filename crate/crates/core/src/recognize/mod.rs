//! Word-image transcription: charset policy, input normalization and the
//! pluggable recognizer backends.

mod external;
mod template;

pub use external::ExternalRecognizer;
pub use template::{GlyphAtlas, TemplateRecognizer};

use crate::detect::TextBox;
use crate::imaging::{resize_antialias, Image, ImagingError};
use std::collections::HashSet;
use thiserror::Error;

/// Height every word image is scaled to before recognition.
pub const MODEL_HEIGHT: u32 = 32;

#[derive(Debug, Error)]
pub enum RecognizeError {
    #[error("charset contains duplicate symbol '{0}'")]
    DuplicateSymbol(char),
    #[error("recognizer '{name}' failed: {message}")]
    Backend { name: String, message: String },
    #[error("recognizer adapter exited with {status}: {stderr}")]
    AdapterExit { status: i32, stderr: String },
    #[error("cannot parse recognizer output line '{line}': {message}")]
    Parse { line: String, message: String },
    #[error("glyph atlas needs at least one font")]
    EmptyFontSet,
    #[error("imaging error: {0}")]
    Imaging(#[from] ImagingError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Ordered set of symbols a recognizer may emit: lowercase letters, digits
/// and a small group of punctuation marks.
#[derive(Debug, Clone)]
pub struct Charset {
    symbols: Vec<char>,
    lookup: HashSet<char>,
}

impl Default for Charset {
    fn default() -> Self {
        let mut symbols: Vec<char> = ('a'..='z').collect();
        symbols.extend('0'..='9');
        symbols.extend(['-', ',', '?', '\'', '.', ':', '!']);
        Charset::new(symbols).expect("default charset has no duplicates")
    }
}

impl Charset {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self, RecognizeError> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        let mut lookup = HashSet::with_capacity(symbols.len());
        for &c in &symbols {
            if !lookup.insert(c) {
                return Err(RecognizeError::DuplicateSymbol(c));
            }
        }
        Ok(Charset { symbols, lookup })
    }

    pub fn contains(&self, c: char) -> bool {
        self.lookup.contains(&c)
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    /// Lowercase `text` and drop every character outside the charset.
    pub fn sanitize(&self, text: &str) -> String {
        text.chars()
            .flat_map(char::to_lowercase)
            .filter(|c| self.contains(*c))
            .collect()
    }
}

/// A word crop ready for recognition.
#[derive(Debug, Clone)]
pub struct WordImage {
    pub image: Image,
    pub source_box: TextBox,
    pub frame_index: u32,
}

/// Transcription of one word image.
#[derive(Debug, Clone, PartialEq)]
pub struct Recognition {
    pub text: String,
    pub confidence: f64,
}

/// Raw backend output before charset restriction.
#[derive(Debug, Clone)]
pub struct RawRecognition {
    pub text: String,
    pub confidence: Option<f64>,
}

/// Recognition backend; same concurrency contract as detectors.
pub trait RecognizerBackend: Send + Sync {
    fn name(&self) -> &str;
    fn recognize_word(&self, image: &Image) -> Result<RawRecognition, RecognizeError>;

    /// Transcribe several crops at once; adapters with process startup cost
    /// override this.
    fn recognize_batch(&self, images: &[Image]) -> Result<Vec<RawRecognition>, RecognizeError> {
        images.iter().map(|img| self.recognize_word(img)).collect()
    }

    fn single_flight(&self) -> bool {
        false
    }
}

/// Scale to `target_h` preserving aspect ratio; width rounds half-up with a
/// floor of one pixel.
pub fn normalize_height(img: &Image, target_h: u32) -> Result<Image, ImagingError> {
    let scaled = img.width() as f64 * target_h as f64 / img.height() as f64;
    let new_w = (scaled.round() as u32).max(1);
    resize_antialias(img, new_w, target_h)
}

/// Run a backend on a normalized word image and post-process its output:
/// lowercase, restrict to the charset, default missing confidences to 1.
pub fn recognize(
    word: &WordImage,
    backend: &dyn RecognizerBackend,
    charset: &Charset,
) -> Result<Recognition, RecognizeError> {
    let raw = backend.recognize_word(&word.image)?;
    Ok(clean_recognition(raw, charset))
}

pub(crate) fn clean_recognition(raw: RawRecognition, charset: &Charset) -> Recognition {
    Recognition {
        text: charset.sanitize(&raw.text),
        confidence: raw.confidence.unwrap_or(1.0).clamp(0.0, 1.0),
    }
}

#[cfg(test)]
mod tests;
