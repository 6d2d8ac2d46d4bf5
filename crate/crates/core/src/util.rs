//! Small shared helpers.

/// First couple of KB of a subprocess's stderr, for error messages.
pub(crate) fn stderr_excerpt(stderr: &[u8]) -> String {
    let text = String::from_utf8_lossy(stderr);
    let trimmed = text.trim();
    if trimmed.chars().count() > 2048 {
        let head: String = trimmed.chars().take(2048).collect();
        format!("{head}...")
    } else {
        trimmed.to_string()
    }
}
