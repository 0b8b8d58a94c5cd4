//! Laplacian sharpening and global illumination normalization.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::imgcore::{clamp_to_gray, convolve, histogram, mean_intensity, ColorImage, GrayImage, Kernel, SignedImage};
use crate::scalar::Scalar;

/// Tunables for [`normalize_illumination`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, bound = "T: Scalar")]
pub struct NormalizationParams<T> {
    /// Fraction of the mean intensity subtracted from every pixel.
    pub subtract_fraction: T,
    /// Fraction of brightest pixels averaged to estimate the peak level.
    pub top_fraction: T,
    /// Minimum peak-minus-mean gap that triggers the subtraction.
    pub activation_threshold: T,
}

impl<T: Scalar> Default for NormalizationParams<T> {
    fn default() -> Self {
        Self { subtract_fraction: T::lit(0.45), top_fraction: T::lit(1.0 / 80.0), activation_threshold: T::lit(40.0) }
    }
}

impl<T: Scalar> NormalizationParams<T> {
    pub fn validate(&self) -> Result<()> {
        let unit = |v: T| v > T::zero() && v < T::one();
        if !unit(self.subtract_fraction) {
            return Err(invalid("subtract_fraction must lie in (0, 1)"));
        }
        if !unit(self.top_fraction) {
            return Err(invalid("top_fraction must lie in (0, 1)"));
        }
        if !(self.activation_threshold >= T::zero() && self.activation_threshold <= T::lit(255.0)) {
            return Err(invalid("activation_threshold must lie in [0, 255]"));
        }
        Ok(())
    }
}

/// Convolution with the 4-neighbour Laplacian, replicate border.
pub fn laplacian<T: Scalar>(img: &GrayImage) -> SignedImage<T> {
    convolve(img, &Kernel::laplacian4())
}

/// `clamp(f − ∇²f)`.
pub fn sharpen(img: &GrayImage) -> GrayImage {
    // All terms are small integers, so f32 is exact here.
    let lap = laplacian::<f32>(img);
    let diff = SignedImage::<f32>::from_gray(img).zip_with(&lap, |f, l| f - l).expect("same dimensions");
    clamp_to_gray(&diff)
}

/// Sharpens each colour plane independently.
pub fn sharpen_color(img: &ColorImage) -> ColorImage {
    img.map_planes(sharpen)
}

/// Mean of the `max(1, floor(top_fraction · N))` brightest pixels.
///
/// Pixels are taken from the histogram starting at bin 255; the last bin
/// touched contributes only as many pixels as are still needed.
pub fn top_group_mean<T: Scalar>(img: &GrayImage, top_fraction: T) -> Result<T> {
    if !(top_fraction > T::zero() && top_fraction < T::one()) {
        return Err(invalid("top_fraction must lie in (0, 1)"));
    }
    let hist = histogram(img);
    let total = hist.total();
    let n = (top_fraction * T::from_count(total)).floor().to_u64().unwrap_or(0).max(1);

    let mut remaining = n;
    let mut sum = 0u64;
    for v in (0..=255u8).rev() {
        let take = hist.count(v).min(remaining);
        sum += take * v as u64;
        remaining -= take;
        if remaining == 0 {
            break;
        }
    }
    Ok(T::from_count(sum) / T::from_count(n))
}

/// Subtracts a fixed share of the mean intensity from every pixel when the
/// image's bright tail stands far enough above its mean.
///
/// The input is expected to be the inverted gray image.
pub fn normalize_illumination<T: Scalar>(inverted: &GrayImage, params: &NormalizationParams<T>) -> GrayImage {
    match illumination_offset(inverted, params) {
        Some(offset) => inverted.map(|v| v.saturating_sub(offset)),
        None => inverted.clone(),
    }
}

/// The amount [`normalize_illumination`] would subtract, or `None` when the
/// activation gate stays closed.
pub fn illumination_offset<T: Scalar>(inverted: &GrayImage, params: &NormalizationParams<T>) -> Option<u8> {
    let mean: T = mean_intensity(inverted);
    let top = top_group_mean(inverted, params.top_fraction).ok()?;
    if top - mean > params.activation_threshold {
        let offset = (params.subtract_fraction * mean).round();
        Some(offset.to_u8().unwrap_or(255))
    } else {
        None
    }
}
