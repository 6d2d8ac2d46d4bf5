//! Owned raster images and the preprocessing variants applied before
//! detection and recognition.

mod codec;
mod filters;
mod resize;

pub use codec::{decode_image, encode_jpeg, encode_png, load_image, save_jpeg, save_png};
pub use codec::DEFAULT_JPEG_QUALITY;
pub use filters::{
    binarize, gaussian_blur_5x5, max_rgb_filter, morphological_open, otsu_threshold,
    to_grayscale, GAUSSIAN_KERNEL_5X5, GAUSSIAN_SIGMA,
};
pub use resize::resize_antialias;

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImagingError {
    #[error("image dimensions must be non-zero (got {width}x{height})")]
    ZeroDimension { width: u32, height: u32 },
    #[error("unsupported channel count {0} (expected 1 or 3)")]
    BadChannelCount(u8),
    #[error("expected a {expected}-channel image, got {got} channels")]
    ChannelMismatch { expected: u8, got: u8 },
    #[error("data length {got} does not match {width}x{height}x{channels} = {expected}")]
    DataLength {
        width: u32,
        height: u32,
        channels: u8,
        expected: usize,
        got: usize,
    },
    #[error("image is not binary: pixel value {0} is neither 0 nor 255")]
    NotBinary(u8),
    #[error("resize target must be non-zero (got {0}x{1})")]
    ZeroResizeTarget(u32, u32),
    #[error("codec error: {0}")]
    Codec(#[from] image::ImageError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Row-major 8-bit raster, either grayscale (1 channel) or RGB (3 channels).
#[derive(Clone, PartialEq, Eq)]
pub struct Image {
    width: u32,
    height: u32,
    channels: u8,
    data: Vec<u8>,
}

impl Image {
    pub fn new(width: u32, height: u32, channels: u8, data: Vec<u8>) -> Result<Self, ImagingError> {
        if width == 0 || height == 0 {
            return Err(ImagingError::ZeroDimension { width, height });
        }
        if channels != 1 && channels != 3 {
            return Err(ImagingError::BadChannelCount(channels));
        }
        let expected = width as usize * height as usize * channels as usize;
        if data.len() != expected {
            return Err(ImagingError::DataLength {
                width,
                height,
                channels,
                expected,
                got: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    /// Image with every sample set to `value`.
    pub fn filled(width: u32, height: u32, channels: u8, value: u8) -> Result<Self, ImagingError> {
        let len = width as usize * height as usize * channels as usize;
        Self::new(width, height, channels, vec![value; len])
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn channels(&self) -> u8 {
        self.channels
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    pub fn is_grayscale(&self) -> bool {
        self.channels == 1
    }

    /// Samples of the pixel at (x, y); length equals the channel count.
    pub fn pixel(&self, x: u32, y: u32) -> &[u8] {
        debug_assert!(x < self.width && y < self.height);
        let c = self.channels as usize;
        let off = (y as usize * self.width as usize + x as usize) * c;
        &self.data[off..off + c]
    }

    /// Single sample accessor for grayscale images.
    pub fn luma(&self, x: u32, y: u32) -> u8 {
        debug_assert_eq!(self.channels, 1);
        self.data[y as usize * self.width as usize + x as usize]
    }

    /// Copy of the axis-aligned region; the rectangle must lie inside the image.
    pub fn crop(&self, x: u32, y: u32, w: u32, h: u32) -> Result<Image, ImagingError> {
        if w == 0 || h == 0 {
            return Err(ImagingError::ZeroDimension {
                width: w,
                height: h,
            });
        }
        assert!(
            x.saturating_add(w) <= self.width && y.saturating_add(h) <= self.height,
            "crop rectangle out of bounds"
        );
        let c = self.channels as usize;
        let mut out = Vec::with_capacity(w as usize * h as usize * c);
        for row in y..y + h {
            let start = (row as usize * self.width as usize + x as usize) * c;
            out.extend_from_slice(&self.data[start..start + w as usize * c]);
        }
        Image::new(w, h, self.channels, out)
    }

    fn require_channels(&self, expected: u8) -> Result<(), ImagingError> {
        if self.channels != expected {
            return Err(ImagingError::ChannelMismatch {
                expected,
                got: self.channels,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for Image {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Image")
            .field("width", &self.width)
            .field("height", &self.height)
            .field("channels", &self.channels)
            .finish()
    }
}

/// The five frame preprocessing variants applied ahead of recognition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PreprocessMethod {
    #[default]
    None,
    Otsu,
    BlurOtsu,
    BlurOtsuOpen,
    MaxRgb,
}

impl PreprocessMethod {
    pub const ALL: [PreprocessMethod; 5] = [
        PreprocessMethod::None,
        PreprocessMethod::Otsu,
        PreprocessMethod::BlurOtsu,
        PreprocessMethod::BlurOtsuOpen,
        PreprocessMethod::MaxRgb,
    ];
}

impl fmt::Display for PreprocessMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PreprocessMethod::None => "none",
            PreprocessMethod::Otsu => "otsu",
            PreprocessMethod::BlurOtsu => "blur-otsu",
            PreprocessMethod::BlurOtsuOpen => "blur-otsu-open",
            PreprocessMethod::MaxRgb => "max-rgb",
        };
        f.write_str(s)
    }
}

impl FromStr for PreprocessMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(PreprocessMethod::None),
            "otsu" => Ok(PreprocessMethod::Otsu),
            "blur-otsu" => Ok(PreprocessMethod::BlurOtsu),
            "blur-otsu-open" => Ok(PreprocessMethod::BlurOtsuOpen),
            "max-rgb" => Ok(PreprocessMethod::MaxRgb),
            other => Err(format!(
                "unknown preprocessing method '{other}' \
                 (expected none|otsu|blur-otsu|blur-otsu-open|max-rgb)"
            )),
        }
    }
}

/// Apply one of the preprocessing variants, always producing a grayscale image.
///
/// RGB inputs are first collapsed to one channel (luma, or per-pixel max for
/// `MaxRgb`); grayscale inputs pass that stage through unchanged.
pub fn preprocess(img: &Image, method: PreprocessMethod) -> Result<Image, ImagingError> {
    let gray = |img: &Image| -> Result<Image, ImagingError> {
        if img.is_grayscale() {
            Ok(img.clone())
        } else {
            to_grayscale(img)
        }
    };
    match method {
        PreprocessMethod::None => gray(img),
        PreprocessMethod::MaxRgb => {
            if img.is_grayscale() {
                Ok(img.clone())
            } else {
                max_rgb_filter(img)
            }
        }
        PreprocessMethod::Otsu => {
            let g = gray(img)?;
            let t = otsu_threshold(&g)?;
            binarize(&g, t)
        }
        PreprocessMethod::BlurOtsu => {
            let g = gaussian_blur_5x5(&gray(img)?)?;
            let t = otsu_threshold(&g)?;
            binarize(&g, t)
        }
        PreprocessMethod::BlurOtsuOpen => {
            let g = gaussian_blur_5x5(&gray(img)?)?;
            let t = otsu_threshold(&g)?;
            morphological_open(&binarize(&g, t)?)
        }
    }
}

#[cfg(test)]
mod tests;
