//! PNG and JPEG reading/writing on top of the `image` crate.

use super::{Image, ImagingError};
use image::codecs::jpeg::JpegEncoder;
use image::codecs::png::PngEncoder;
use image::{DynamicImage, ExtendedColorType, ImageEncoder};
use std::fs;
use std::path::Path;

/// Quality used for JPEG output when the caller does not override it.
pub const DEFAULT_JPEG_QUALITY: u8 = 90;

pub fn load_image(path: &Path) -> Result<Image, ImagingError> {
    let bytes = fs::read(path)?;
    decode_image(&bytes)
}

pub fn decode_image(bytes: &[u8]) -> Result<Image, ImagingError> {
    let dynamic = image::load_from_memory(bytes)?;
    Ok(match dynamic {
        DynamicImage::ImageLuma8(buf) => {
            let (w, h) = buf.dimensions();
            Image::new(w, h, 1, buf.into_raw())?
        }
        DynamicImage::ImageRgb8(buf) => {
            let (w, h) = buf.dimensions();
            Image::new(w, h, 3, buf.into_raw())?
        }
        other => {
            let buf = other.into_rgb8();
            let (w, h) = buf.dimensions();
            Image::new(w, h, 3, buf.into_raw())?
        }
    })
}

pub fn encode_png(img: &Image) -> Result<Vec<u8>, ImagingError> {
    let mut out = Vec::new();
    PngEncoder::new(&mut out).write_image(
        img.data(),
        img.width(),
        img.height(),
        color_type(img),
    )?;
    Ok(out)
}

pub fn encode_jpeg(img: &Image, quality: u8) -> Result<Vec<u8>, ImagingError> {
    let mut out = Vec::new();
    JpegEncoder::new_with_quality(&mut out, quality).write_image(
        img.data(),
        img.width(),
        img.height(),
        color_type(img),
    )?;
    Ok(out)
}

pub fn save_png(path: &Path, img: &Image) -> Result<(), ImagingError> {
    Ok(fs::write(path, encode_png(img)?)?)
}

pub fn save_jpeg(path: &Path, img: &Image, quality: u8) -> Result<(), ImagingError> {
    Ok(fs::write(path, encode_jpeg(img, quality)?)?)
}

fn color_type(img: &Image) -> ExtendedColorType {
    if img.is_grayscale() {
        ExtendedColorType::L8
    } else {
        ExtendedColorType::Rgb8
    }
}
