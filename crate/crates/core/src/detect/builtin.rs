//! Reference detector: connected-component analysis on a binarized frame
//! with components grouped into word boxes.

use super::{row_bands, DetectError, DetectorBackend, TextBox};
use crate::imaging::{binarize, otsu_threshold, to_grayscale, Image};

/// Detector that labels foreground components of the binarized frame and
/// merges horizontally close components into word boxes.
#[derive(Debug, Clone)]
pub struct BuiltinDetector {
    /// Components closer than this fraction of the median component height
    /// merge into one word. Backend-specific constant, tuned on fixtures.
    pub word_gap_factor: f64,
    /// Components smaller than this many pixels are treated as noise.
    pub min_component_area: u32,
}

impl Default for BuiltinDetector {
    fn default() -> Self {
        BuiltinDetector {
            word_gap_factor: 0.6,
            min_component_area: 4,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Component {
    x0: u32,
    y0: u32,
    x1: u32, // inclusive
    y1: u32, // inclusive
    area: u32,
}

impl Component {
    fn width(&self) -> u32 {
        self.x1 - self.x0 + 1
    }

    fn height(&self) -> u32 {
        self.y1 - self.y0 + 1
    }
}

impl DetectorBackend for BuiltinDetector {
    fn name(&self) -> &str {
        "builtin"
    }

    fn detect(&self, frame: &Image) -> Result<Vec<TextBox>, DetectError> {
        let binary = to_foreground_mask(frame)?;
        let components = connected_components(&binary, self.min_component_area);
        if components.is_empty() {
            return Ok(Vec::new());
        }

        let mut heights: Vec<u32> = components.iter().map(Component::height).collect();
        heights.sort_unstable();
        let median_height = if heights.len() % 2 == 1 {
            heights[heights.len() / 2] as f64
        } else {
            (heights[heights.len() / 2 - 1] + heights[heights.len() / 2]) as f64 / 2.0
        };
        let max_gap = self.word_gap_factor * median_height;

        let roots = row_bands(
            &components
                .iter()
                .map(|c| (c.y0, c.height()))
                .collect::<Vec<_>>(),
        );

        let mut boxes = Vec::new();
        let mut band_ids: Vec<usize> = roots.clone();
        band_ids.sort_unstable();
        band_ids.dedup();
        for band in band_ids {
            let mut row: Vec<&Component> = components
                .iter()
                .zip(&roots)
                .filter(|(_, &r)| r == band)
                .map(|(c, _)| c)
                .collect();
            row.sort_by_key(|c| (c.x0, c.y0));

            let mut current = *row[0];
            for c in row.into_iter().skip(1) {
                let gap = c.x0 as f64 - (current.x1 + 1) as f64;
                if gap < max_gap {
                    current.x0 = current.x0.min(c.x0);
                    current.y0 = current.y0.min(c.y0);
                    current.x1 = current.x1.max(c.x1);
                    current.y1 = current.y1.max(c.y1);
                    current.area += c.area;
                } else {
                    boxes.push(word_box(&current, &binary));
                    current = *c;
                }
            }
            boxes.push(word_box(&current, &binary));
        }
        Ok(boxes)
    }
}

/// Binarize to a mask where 255 marks text-candidate foreground.
///
/// Accepts RGB, plain grayscale or already-binary frames. The minority
/// class after thresholding is taken as foreground, since overlay glyphs
/// cover far fewer pixels than the background.
fn to_foreground_mask(frame: &Image) -> Result<Image, DetectError> {
    let gray = if frame.is_grayscale() {
        frame.clone()
    } else {
        to_grayscale(frame)?
    };
    let already_binary = gray.data().iter().all(|&p| p == 0 || p == 255);
    let binary = if already_binary {
        gray
    } else {
        let t = otsu_threshold(&gray)?;
        binarize(&gray, t)?
    };
    let white = binary.data().iter().filter(|&&p| p == 255).count();
    if white * 2 > binary.data().len() {
        let inverted: Vec<u8> = binary.data().iter().map(|&p| 255 - p).collect();
        Ok(Image::new(binary.width(), binary.height(), 1, inverted)?)
    } else {
        Ok(binary)
    }
}

/// 8-connected component labelling over foreground (255) pixels.
fn connected_components(mask: &Image, min_area: u32) -> Vec<Component> {
    let w = mask.width() as usize;
    let h = mask.height() as usize;
    let data = mask.data();
    let mut visited = vec![false; w * h];
    let mut out = Vec::new();
    let mut stack = Vec::new();

    for start in 0..w * h {
        if visited[start] || data[start] != 255 {
            continue;
        }
        visited[start] = true;
        stack.push(start);
        let mut comp = Component {
            x0: u32::MAX,
            y0: u32::MAX,
            x1: 0,
            y1: 0,
            area: 0,
        };
        while let Some(idx) = stack.pop() {
            let (x, y) = ((idx % w) as u32, (idx / w) as u32);
            comp.x0 = comp.x0.min(x);
            comp.y0 = comp.y0.min(y);
            comp.x1 = comp.x1.max(x);
            comp.y1 = comp.y1.max(y);
            comp.area += 1;
            for dy in -1i64..=1 {
                for dx in -1i64..=1 {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let nx = x as i64 + dx;
                    let ny = y as i64 + dy;
                    if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                        continue;
                    }
                    let nidx = ny as usize * w + nx as usize;
                    if !visited[nidx] && data[nidx] == 255 {
                        visited[nidx] = true;
                        stack.push(nidx);
                    }
                }
            }
        }
        if comp.area >= min_area {
            out.push(comp);
        }
    }
    out
}

fn word_box(c: &Component, mask: &Image) -> TextBox {
    let (w, h) = (c.width(), c.height());
    let mut foreground = 0u64;
    for y in c.y0..=c.y1 {
        for x in c.x0..=c.x1 {
            if mask.luma(x, y) == 255 {
                foreground += 1;
            }
        }
    }
    let density = foreground as f64 / (w as u64 * h as u64) as f64;
    TextBox {
        x: c.x0,
        y: c.y0,
        w,
        h,
        score: density.clamp(0.0, 1.0),
    }
}
