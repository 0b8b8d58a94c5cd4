//! PNG and binary PGM/PPM decoding and encoding.

use std::path::Path;

use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{DynamicImage, ExtendedColorType, ImageEncoder, ImageFormat};

use super::{ColorImage, GrayImage};
use crate::error::{invalid, Result};

const SUPPORTED: [&str; 4] = ["png", "ppm", "pgm", "pnm"];

/// Whether `path` has one of the decodable extensions.
pub fn is_supported(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .map(|e| SUPPORTED.contains(&e.to_ascii_lowercase().as_str()))
        .unwrap_or(false)
}

fn format_for(path: &Path) -> Result<ImageFormat> {
    match path.extension().and_then(|e| e.to_str()).map(|e| e.to_ascii_lowercase()) {
        Some(e) if e == "png" => Ok(ImageFormat::Png),
        Some(e) if e == "ppm" || e == "pgm" || e == "pnm" => Ok(ImageFormat::Pnm),
        _ => Err(invalid(format!("unsupported image format: {}", path.display()))),
    }
}

fn from_dynamic(img: DynamicImage) -> Result<ColorImage> {
    let rgb = img.to_rgb8();
    ColorImage::from_interleaved(rgb.width() as usize, rgb.height() as usize, rgb.as_raw())
}

/// Decodes any supported file into RGB. Gray inputs fill all three planes.
pub fn read_color(path: &Path) -> Result<ColorImage> {
    let format = format_for(path)?;
    let bytes = std::fs::read(path)?;
    from_dynamic(image::load_from_memory_with_format(&bytes, format)?)
}

pub fn decode_color(bytes: &[u8]) -> Result<ColorImage> {
    from_dynamic(image::load_from_memory(bytes)?)
}

pub fn read_gray(path: &Path) -> Result<GrayImage> {
    let format = format_for(path)?;
    let bytes = std::fs::read(path)?;
    let luma = image::load_from_memory_with_format(&bytes, format)?.to_luma8();
    GrayImage::new(luma.width() as usize, luma.height() as usize, luma.into_raw())
}

fn write_raw(path: &Path, bytes: &[u8], width: usize, height: usize, color: ExtendedColorType) -> Result<()> {
    let file = std::io::BufWriter::new(std::fs::File::create(path)?);
    let (w, h) = (width as u32, height as u32);
    match format_for(path)? {
        ImageFormat::Png => image::codecs::png::PngEncoder::new(file).write_image(bytes, w, h, color)?,
        _ => {
            let subtype = match color {
                ExtendedColorType::L8 => PnmSubtype::Graymap(SampleEncoding::Binary),
                _ => PnmSubtype::Pixmap(SampleEncoding::Binary),
            };
            PnmEncoder::new(file).with_subtype(subtype).write_image(bytes, w, h, color)?
        }
    }
    Ok(())
}

/// Writes PNG or binary PPM (`P6`) depending on the extension.
pub fn write_color(img: &ColorImage, path: &Path) -> Result<()> {
    write_raw(path, &img.to_interleaved(), img.width(), img.height(), ExtendedColorType::Rgb8)
}

/// Writes PNG or binary PGM (`P5`) depending on the extension.
pub fn write_gray(img: &GrayImage, path: &Path) -> Result<()> {
    write_raw(path, img.data(), img.width(), img.height(), ExtendedColorType::L8)
}
