//! Subprocess recognizer adapter: word-crop PNG paths go in on stdin, one
//! JSON line with `{"text", "confidence"}` comes back per input.

use super::{RawRecognition, RecognizeError, RecognizerBackend};
use crate::imaging::{save_png, Image};
use serde::Deserialize;
use std::io::Write;
use std::process::{Command, Stdio};

#[derive(Debug, Deserialize)]
struct AdapterReply {
    text: String,
    #[serde(default)]
    confidence: Option<f64>,
}

/// Adapter that shells out to an external recognizer.
#[derive(Debug, Clone)]
pub struct ExternalRecognizer {
    command: Vec<String>,
}

impl ExternalRecognizer {
    pub fn new(command: Vec<String>) -> Result<Self, RecognizeError> {
        if command.is_empty() {
            return Err(RecognizeError::Backend {
                name: "external".into(),
                message: "empty recognizer command".into(),
            });
        }
        Ok(ExternalRecognizer { command })
    }

    fn run(&self, images: &[Image]) -> Result<Vec<RawRecognition>, RecognizeError> {
        if images.is_empty() {
            return Ok(Vec::new());
        }
        let dir = tempfile::tempdir()?;
        let mut request = String::new();
        for (i, img) in images.iter().enumerate() {
            let path = dir.path().join(format!("word_{i:04}.png"));
            save_png(&path, img)?;
            request.push_str(&path.to_string_lossy());
            request.push('\n');
        }

        let mut child = Command::new(&self.command[0])
            .args(&self.command[1..])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| RecognizeError::Backend {
                name: self.command[0].clone(),
                message: format!("failed to launch: {e}"),
            })?;
        child
            .stdin
            .take()
            .expect("stdin was piped")
            .write_all(request.as_bytes())?;
        let output = child.wait_with_output()?;

        if !output.status.success() {
            return Err(RecognizeError::AdapterExit {
                status: output.status.code().unwrap_or(-1),
                stderr: crate::detect::stderr_excerpt_pub(&output.stderr),
            });
        }

        let stdout = String::from_utf8_lossy(&output.stdout);
        let replies: Vec<RawRecognition> = stdout
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|line| {
                serde_json::from_str::<AdapterReply>(line)
                    .map(|r| RawRecognition {
                        text: r.text,
                        confidence: r.confidence,
                    })
                    .map_err(|e| RecognizeError::Parse {
                        line: line.to_string(),
                        message: e.to_string(),
                    })
            })
            .collect::<Result<_, _>>()?;

        if replies.len() != images.len() {
            return Err(RecognizeError::Backend {
                name: self.command[0].clone(),
                message: format!(
                    "adapter answered {} lines for {} inputs",
                    replies.len(),
                    images.len()
                ),
            });
        }
        Ok(replies)
    }
}

impl RecognizerBackend for ExternalRecognizer {
    fn name(&self) -> &str {
        &self.command[0]
    }

    fn recognize_word(&self, image: &Image) -> Result<RawRecognition, RecognizeError> {
        Ok(self.run(std::slice::from_ref(image))?.remove(0))
    }

    fn recognize_batch(&self, images: &[Image]) -> Result<Vec<RawRecognition>, RecognizeError> {
        self.run(images)
    }
}
