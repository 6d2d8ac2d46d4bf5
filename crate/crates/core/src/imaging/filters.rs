//! Pixel-level filters: channel collapse, Otsu thresholding, blur and opening.

use super::{Image, ImagingError};
use std::sync::LazyLock;

/// Sigma of the fixed 5x5 Gaussian kernel.
pub const GAUSSIAN_SIGMA: f64 = 1.1;

/// Normalized 5x5 Gaussian kernel with sigma 1.1, row-major.
///
/// Outer product of the 1-D taps
/// `exp(-d²/(2·1.1²))` for `d in -2..=2`, normalized to unit sum:
/// approximately `[0.070766, 0.244460, 0.369546, 0.244460, 0.070766]` per axis.
pub static GAUSSIAN_KERNEL_5X5: LazyLock<[[f64; 5]; 5]> = LazyLock::new(|| {
    let mut taps = [0.0f64; 5];
    for (i, t) in taps.iter_mut().enumerate() {
        let d = i as f64 - 2.0;
        *t = (-d * d / (2.0 * GAUSSIAN_SIGMA * GAUSSIAN_SIGMA)).exp();
    }
    let sum: f64 = taps.iter().sum();
    let mut k = [[0.0f64; 5]; 5];
    for (y, row) in k.iter_mut().enumerate() {
        for (x, w) in row.iter_mut().enumerate() {
            *w = taps[y] * taps[x] / (sum * sum);
        }
    }
    k
});

/// Collapse RGB to luma using BT.601 weights, rounded to nearest.
pub fn to_grayscale(img: &Image) -> Result<Image, ImagingError> {
    img.require_channels(3)?;
    let data = img
        .data()
        .chunks_exact(3)
        .map(|px| {
            let luma = 0.299 * px[0] as f64 + 0.587 * px[1] as f64 + 0.114 * px[2] as f64;
            luma.round().min(255.0) as u8
        })
        .collect();
    Image::new(img.width(), img.height(), 1, data)
}

/// Collapse RGB by taking the maximum sample of each pixel.
pub fn max_rgb_filter(img: &Image) -> Result<Image, ImagingError> {
    img.require_channels(3)?;
    let data = img
        .data()
        .chunks_exact(3)
        .map(|px| px[0].max(px[1]).max(px[2]))
        .collect();
    Image::new(img.width(), img.height(), 1, data)
}

/// Global threshold maximizing the between-class variance of the split
/// `{p <= t}` vs `{p > t}`.
///
/// Ties resolve to the smallest maximizing threshold. A constant image
/// returns that constant (every split is degenerate there).
pub fn otsu_threshold(img: &Image) -> Result<u8, ImagingError> {
    img.require_channels(1)?;

    let mut hist = [0u64; 256];
    for &p in img.data() {
        hist[p as usize] += 1;
    }

    let total: u64 = img.data().len() as u64;
    let mut nonzero = hist.iter().enumerate().filter(|(_, &c)| c > 0);
    let first = nonzero.next().map(|(v, _)| v as u8).unwrap_or(0);
    if nonzero.next().is_none() {
        return Ok(first);
    }

    let total_sum: f64 = hist
        .iter()
        .enumerate()
        .map(|(v, &c)| v as f64 * c as f64)
        .sum();

    let mut best_t = 0u8;
    let mut best_var = f64::NEG_INFINITY;
    let mut w0 = 0u64;
    let mut sum0 = 0.0f64;
    for t in 0..256usize {
        w0 += hist[t];
        sum0 += t as f64 * hist[t] as f64;
        let w1 = total - w0;
        let var = if w0 == 0 || w1 == 0 {
            0.0
        } else {
            let mean0 = sum0 / w0 as f64;
            let mean1 = (total_sum - sum0) / w1 as f64;
            let d = mean0 - mean1;
            w0 as f64 * w1 as f64 * d * d
        };
        if var > best_var {
            best_var = var;
            best_t = t as u8;
        }
    }
    Ok(best_t)
}

/// Map samples at or below `t` to 0 and everything above to 255.
pub fn binarize(img: &Image, t: u8) -> Result<Image, ImagingError> {
    img.require_channels(1)?;
    let data = img
        .data()
        .iter()
        .map(|&p| if p <= t { 0 } else { 255 })
        .collect();
    Image::new(img.width(), img.height(), 1, data)
}

/// Convolve with the normalized 5x5 Gaussian kernel; borders replicate the
/// nearest edge pixel, output rounds half-up.
pub fn gaussian_blur_5x5(img: &Image) -> Result<Image, ImagingError> {
    img.require_channels(1)?;
    let k = *GAUSSIAN_KERNEL_5X5;
    let (w, h) = (img.width() as i64, img.height() as i64);
    let mut out = Vec::with_capacity(img.data().len());
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0f64;
            for (ky, row) in k.iter().enumerate() {
                let sy = (y + ky as i64 - 2).clamp(0, h - 1) as u32;
                for (kx, &weight) in row.iter().enumerate() {
                    let sx = (x + kx as i64 - 2).clamp(0, w - 1) as u32;
                    acc += weight * img.luma(sx, sy) as f64;
                }
            }
            out.push(acc.round().clamp(0.0, 255.0) as u8);
        }
    }
    Image::new(img.width(), img.height(), 1, out)
}

/// Erosion followed by dilation with a 3x3 square element, replicated borders.
///
/// Input must be strictly binary (every sample 0 or 255).
pub fn morphological_open(img: &Image) -> Result<Image, ImagingError> {
    img.require_channels(1)?;
    if let Some(&bad) = img.data().iter().find(|&&p| p != 0 && p != 255) {
        return Err(ImagingError::NotBinary(bad));
    }
    let eroded = morph_3x3(img, true);
    Ok(morph_3x3(&eroded, false))
}

fn morph_3x3(img: &Image, erode: bool) -> Image {
    let (w, h) = (img.width() as i64, img.height() as i64);
    let mut out = Vec::with_capacity(img.data().len());
    for y in 0..h {
        for x in 0..w {
            let mut acc = if erode { 255u8 } else { 0u8 };
            for dy in -1..=1i64 {
                let sy = (y + dy).clamp(0, h - 1) as u32;
                for dx in -1..=1i64 {
                    let sx = (x + dx).clamp(0, w - 1) as u32;
                    let p = img.luma(sx, sy);
                    acc = if erode { acc.min(p) } else { acc.max(p) };
                }
            }
            out.push(acc);
        }
    }
    Image::new(img.width(), img.height(), 1, out).expect("same dimensions as input")
}
