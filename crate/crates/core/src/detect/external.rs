//! Subprocess detector adapter: the frame goes out as a PNG path, boxes come
//! back as one JSON object per stdout line.

use super::{DetectError, DetectorBackend, TextBox};
use crate::imaging::{save_png, Image};
use crate::util::stderr_excerpt;
use std::process::Command;

/// Adapter that shells out to an external detector.
///
/// The frame is written as a PNG to a temporary path which is appended as
/// the final argument. The adapter must print one `{"x","y","w","h","score"}`
/// JSON object per detected box and exit 0.
#[derive(Debug, Clone)]
pub struct ExternalDetector {
    command: Vec<String>,
}

impl ExternalDetector {
    /// `command[0]` is the program, the rest are fixed arguments.
    pub fn new(command: Vec<String>) -> Result<Self, DetectError> {
        if command.is_empty() {
            return Err(DetectError::Backend {
                name: "external".into(),
                message: "empty detector command".into(),
            });
        }
        Ok(ExternalDetector { command })
    }
}

impl DetectorBackend for ExternalDetector {
    fn name(&self) -> &str {
        &self.command[0]
    }

    fn detect(&self, frame: &Image) -> Result<Vec<TextBox>, DetectError> {
        let dir = tempfile::tempdir()?;
        let png_path = dir.path().join("frame.png");
        save_png(&png_path, frame)?;

        let output = Command::new(&self.command[0])
            .args(&self.command[1..])
            .arg(&png_path)
            .output()
            .map_err(|e| DetectError::Backend {
                name: self.command[0].clone(),
                message: format!("failed to launch: {e}"),
            })?;

        if !output.status.success() {
            return Err(DetectError::AdapterExit {
                status: output.status.code().unwrap_or(-1),
                stderr: stderr_excerpt(&output.stderr),
            });
        }

        let stdout = String::from_utf8_lossy(&output.stdout);
        let mut boxes = Vec::new();
        for line in stdout.lines().filter(|l| !l.trim().is_empty()) {
            let raw: TextBox = serde_json::from_str(line).map_err(|e| DetectError::Parse {
                line: line.to_string(),
                message: e.to_string(),
            })?;
            let parsed = TextBox::new(raw.x, raw.y, raw.w, raw.h, raw.score)?;
            if !parsed.fits(frame.width(), frame.height()) {
                return Err(DetectError::BoxOutsideFrame(
                    parsed,
                    frame.width(),
                    frame.height(),
                ));
            }
            boxes.push(parsed);
        }
        Ok(boxes)
    }
}
