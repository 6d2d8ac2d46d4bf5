//! Anti-aliased resizing: area averaging when an axis shrinks, bilinear when
//! it grows. Both passes run in f64 and round once at the end (half-up).

use super::{Image, ImagingError};

/// Resize to exactly `new_w` x `new_h`.
pub fn resize_antialias(img: &Image, new_w: u32, new_h: u32) -> Result<Image, ImagingError> {
    if new_w == 0 || new_h == 0 {
        return Err(ImagingError::ZeroResizeTarget(new_w, new_h));
    }
    if new_w == img.width() && new_h == img.height() {
        return Ok(img.clone());
    }

    let channels = img.channels() as usize;
    let src_w = img.width() as usize;
    let src_h = img.height() as usize;
    let dst_w = new_w as usize;
    let dst_h = new_h as usize;

    let mut out = vec![0u8; dst_w * dst_h * channels];
    let mut plane = vec![0.0f64; src_w * src_h];
    let mut mid = vec![0.0f64; dst_w * src_h];
    let mut fin = vec![0.0f64; dst_w * dst_h];

    for ch in 0..channels {
        for (i, px) in img.data().chunks_exact(channels).enumerate() {
            plane[i] = px[ch] as f64;
        }
        // Horizontal pass over contiguous rows.
        for row in 0..src_h {
            let src = &plane[row * src_w..(row + 1) * src_w];
            let dst = row * dst_w;
            resample(|j| src[j], src_w, |i, v| mid[dst + i] = v, dst_w);
        }
        // Vertical pass over strided columns.
        for col in 0..dst_w {
            resample(
                |j| mid[j * dst_w + col],
                src_h,
                |i, v| fin[i * dst_w + col] = v,
                dst_h,
            );
        }
        for (i, v) in fin.iter().enumerate() {
            out[i * channels + ch] = v.round().clamp(0.0, 255.0) as u8;
        }
    }

    Image::new(new_w, new_h, img.channels(), out)
}

fn resample(
    get: impl Fn(usize) -> f64,
    n_src: usize,
    mut put: impl FnMut(usize, f64),
    n_dst: usize,
) {
    let scale = n_src as f64 / n_dst as f64;
    if n_dst <= n_src {
        // Shrinking (or same size): average the exact fractional source span.
        for i in 0..n_dst {
            let lo = i as f64 * scale;
            let hi = (i + 1) as f64 * scale;
            let mut acc = 0.0;
            let mut j = lo.floor() as usize;
            while (j as f64) < hi && j < n_src {
                let left = (j as f64).max(lo);
                let right = ((j + 1) as f64).min(hi);
                acc += get(j) * (right - left);
                j += 1;
            }
            put(i, acc / scale);
        }
    } else {
        // Growing: center-aligned bilinear interpolation.
        for i in 0..n_dst {
            let pos = (i as f64 + 0.5) * scale - 0.5;
            let j0 = pos.floor();
            let frac = pos - j0;
            let a = get(j0.max(0.0) as usize);
            let b = get((j0 + 1.0).clamp(0.0, n_src as f64 - 1.0) as usize);
            put(i, a * (1.0 - frac) + b * frac);
        }
    }
}
