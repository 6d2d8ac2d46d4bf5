//! Word-box detection: backend contract, geometric filters and
//! non-maximum suppression.

mod builtin;
mod external;

pub use builtin::BuiltinDetector;
pub use external::ExternalDetector;

use crate::imaging::Image;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default IoU threshold for non-maximum suppression.
pub const DEFAULT_NMS_IOU: f64 = 0.45;
/// Boxes shorter than this many pixels are discarded.
pub const DEFAULT_MIN_BOX_HEIGHT: u32 = 20;

#[derive(Debug, Error)]
pub enum DetectError {
    #[error("invalid box at ({x},{y}) size {w}x{h} score {score}")]
    InvalidBox {
        x: u32,
        y: u32,
        w: u32,
        h: u32,
        score: f64,
    },
    #[error("box {0:?} does not fit a {1}x{2} frame")]
    BoxOutsideFrame(TextBox, u32, u32),
    #[error("detector '{name}' failed: {message}")]
    Backend { name: String, message: String },
    #[error("detector adapter exited with {status}: {stderr}")]
    AdapterExit { status: i32, stderr: String },
    #[error("cannot parse detector output line '{line}': {message}")]
    Parse { line: String, message: String },
    #[error("imaging error: {0}")]
    Imaging(#[from] crate::imaging::ImagingError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Axis-aligned word bounding box with a confidence score.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TextBox {
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
    pub score: f64,
}

impl TextBox {
    pub fn new(x: u32, y: u32, w: u32, h: u32, score: f64) -> Result<Self, DetectError> {
        if w == 0 || h == 0 || !(0.0..=1.0).contains(&score) {
            return Err(DetectError::InvalidBox { x, y, w, h, score });
        }
        Ok(TextBox { x, y, w, h, score })
    }

    pub fn right(&self) -> u32 {
        self.x + self.w
    }

    pub fn bottom(&self) -> u32 {
        self.y + self.h
    }

    pub fn area(&self) -> u64 {
        self.w as u64 * self.h as u64
    }

    pub fn fits(&self, frame_w: u32, frame_h: u32) -> bool {
        self.x as u64 + self.w as u64 <= frame_w as u64
            && self.y as u64 + self.h as u64 <= frame_h as u64
    }

    /// Intersection-over-union with another box.
    pub fn iou(&self, other: &TextBox) -> f64 {
        let ix = self.x.max(other.x);
        let iy = self.y.max(other.y);
        let ix2 = self.right().min(other.right());
        let iy2 = self.bottom().min(other.bottom());
        if ix2 <= ix || iy2 <= iy {
            return 0.0;
        }
        let inter = (ix2 - ix) as u64 * (iy2 - iy) as u64;
        let union = self.area() + other.area() - inter;
        inter as f64 / union as f64
    }
}

/// Detection backend; implementations must either tolerate concurrent
/// `detect` calls or report `single_flight` so the pipeline serializes them.
pub trait DetectorBackend: Send + Sync {
    fn name(&self) -> &str;
    fn detect(&self, frame: &Image) -> Result<Vec<TextBox>, DetectError>;
    fn single_flight(&self) -> bool {
        false
    }
}

/// Greedy non-maximum suppression.
///
/// Candidates are visited by descending score (ties by ascending x, then y)
/// and kept iff their IoU with every previously kept box stays below
/// `iou_threshold`. The kept boxes come back in visit order.
pub fn nms(boxes: &[TextBox], iou_threshold: f64) -> Vec<TextBox> {
    assert!(
        iou_threshold > 0.0 && iou_threshold <= 1.0,
        "NMS IoU threshold must be in (0, 1]"
    );
    let mut order: Vec<&TextBox> = boxes.iter().collect();
    order.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then(a.x.cmp(&b.x))
            .then(a.y.cmp(&b.y))
    });

    let mut kept: Vec<TextBox> = Vec::new();
    for candidate in order {
        if kept.iter().all(|k| k.iou(candidate) < iou_threshold) {
            kept.push(*candidate);
        }
    }
    kept
}

/// Drop boxes shorter than `min_height` and boxes taller than they are wide
/// (overlays are horizontal text).
pub fn filter_boxes(boxes: &[TextBox], min_height: u32) -> Vec<TextBox> {
    boxes
        .iter()
        .filter(|b| b.h >= min_height && b.w >= b.h)
        .copied()
        .collect()
}

/// Fraction of the smaller box's height shared by the vertical extents.
pub(crate) fn vertical_overlap_ratio(ay: u32, ah: u32, by: u32, bh: u32) -> f64 {
    let top = ay.max(by);
    let bottom = (ay + ah).min(by + bh);
    if bottom <= top {
        return 0.0;
    }
    (bottom - top) as f64 / ah.min(bh) as f64
}

/// Group indices into row bands: boxes sharing at least 50% vertical overlap
/// (transitively) read as one row.
pub(crate) fn row_bands(geometry: &[(u32, u32)]) -> Vec<usize> {
    let n = geometry.len();
    let mut parent: Vec<usize> = (0..n).collect();

    fn find(parent: &mut [usize], i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }

    for i in 0..n {
        for j in i + 1..n {
            let (ay, ah) = geometry[i];
            let (by, bh) = geometry[j];
            if vertical_overlap_ratio(ay, ah, by, bh) >= 0.5 {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    (0..n).map(|i| find(&mut parent, i)).collect()
}

/// Sort boxes into reading order: row bands (vertical overlap of at least
/// 50%) from top to bottom, left to right inside each band.
pub fn reading_order(boxes: &[TextBox]) -> Vec<TextBox> {
    let roots = row_bands(&boxes.iter().map(|b| (b.y, b.h)).collect::<Vec<_>>());

    let mut band_top = vec![u32::MAX; boxes.len()];
    for (i, b) in boxes.iter().enumerate() {
        let r = roots[i];
        band_top[r] = band_top[r].min(b.y);
    }

    let mut keyed: Vec<(u32, usize, &TextBox)> = boxes
        .iter()
        .enumerate()
        .map(|(i, b)| (band_top[roots[i]], roots[i], b))
        .collect();
    keyed.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then(a.1.cmp(&b.1))
            .then(a.2.x.cmp(&b.2.x))
            .then(a.2.y.cmp(&b.2.y))
    });
    keyed.into_iter().map(|(_, _, b)| *b).collect()
}

/// Crop every box out of the frame, in reading order.
pub fn crop_words(frame: &Image, boxes: &[TextBox]) -> Vec<Image> {
    reading_order(boxes)
        .iter()
        .map(|b| {
            assert!(
                b.fits(frame.width(), frame.height()),
                "box out of frame bounds"
            );
            frame
                .crop(b.x, b.y, b.w, b.h)
                .expect("validated crop cannot fail")
        })
        .collect()
}
