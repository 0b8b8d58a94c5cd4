use sha2::{Digest, Sha256};

use super::{classify, label_components, DetectionReport, LabelMap, PipelineConfig};
use crate::enhance::{illumination_offset, normalize_illumination, sharpen_color};
use crate::error::{Error, Result};
use crate::imgcore::{invert, to_gray, BinaryImage, ColorImage, GrayImage};
use crate::morph::{close, remove_small_contours};
use crate::scalar::Scalar;
use crate::segment::{binarize, iterative_threshold, ThresholdResult};
use crate::texture::{gradient_binary, gradient_magnitude, GradientMap};

/// Every intermediate raster of one pipeline run.
#[derive(Clone, Debug)]
pub struct PipelineTrace<T> {
    pub sharpened: ColorImage,
    pub gray: GrayImage,
    pub inverted: GrayImage,
    pub illumination_offset: Option<u8>,
    pub normalized: GrayImage,
    /// `None` when the normalized image is constant.
    pub threshold: Option<ThresholdResult<T>>,
    pub foreground: BinaryImage,
    pub closed: BinaryImage,
    pub cleaned: BinaryImage,
    pub labels: LabelMap,
    pub gradient: GradientMap<T>,
    pub gradient_mask: BinaryImage,
}

fn hex_digest(chunks: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for c in chunks {
        h.update(c);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn mask_bytes(m: &BinaryImage) -> Vec<u8> {
    m.data().iter().map(|&b| b as u8).collect()
}

impl<T: Scalar> PipelineTrace<T> {
    /// SHA-256 of each stage's raster, in pipeline order.
    pub fn digests(&self) -> Vec<(&'static str, String)> {
        let labels: Vec<u8> = self.labels.labels().iter().flat_map(|l| l.to_le_bytes()).collect();
        let gradient: Vec<u8> = self.gradient.magnitude().iter().flat_map(|m| m.as_f64().to_le_bytes()).collect();
        vec![
            ("sharpened", hex_digest(&[&self.sharpened.to_interleaved()])),
            ("gray", hex_digest(&[self.gray.data()])),
            ("inverted", hex_digest(&[self.inverted.data()])),
            ("normalized", hex_digest(&[self.normalized.data()])),
            ("foreground", hex_digest(&[&mask_bytes(&self.foreground)])),
            ("closed", hex_digest(&[&mask_bytes(&self.closed)])),
            ("cleaned", hex_digest(&[&mask_bytes(&self.cleaned)])),
            ("labels", hex_digest(&[&labels])),
            ("gradient", hex_digest(&[&gradient])),
            ("gradient_mask", hex_digest(&[&mask_bytes(&self.gradient_mask)])),
        ]
    }
}

/// Runs detection on one image and keeps every intermediate stage.
pub fn run_pipeline_traced<T: Scalar>(
    img: &ColorImage,
    cfg: &PipelineConfig<T>,
) -> Result<(DetectionReport<T>, PipelineTrace<T>)> {
    cfg.validate()?;
    let se = cfg.se.build()?;
    let (w, h) = (img.width(), img.height());

    let sharpened = sharpen_color(img);
    let gray = to_gray(&sharpened);
    let inverted = invert(&gray);
    let offset = illumination_offset(&inverted, &cfg.normalization);
    let normalized = normalize_illumination(&inverted, &cfg.normalization);

    let threshold = match iterative_threshold(&normalized, cfg.t0) {
        Ok(t) => Some(t),
        Err(Error::DegenerateImage(_)) => None,
        Err(e) => return Err(e),
    };
    let foreground = match &threshold {
        Some(t) => binarize(&normalized, t.threshold),
        None => BinaryImage::filled(w, h, false)?,
    };
    let closed = close(&foreground, &se);
    let cleaned = remove_small_contours(&closed, cfg.min_area);
    let labels = label_components(&cleaned, cfg.connectivity);

    let gradient = gradient_magnitude::<T>(&inverted);
    let gradient_mask = gradient_binary(&gradient, cfg.t0)?;

    let mut report = classify(&labels, &gradient_mask, cfg)?;
    report.threshold = threshold.map(|t| t.threshold);

    let trace = PipelineTrace {
        sharpened,
        gray,
        inverted,
        illumination_offset: offset,
        normalized,
        threshold,
        foreground,
        closed,
        cleaned,
        labels,
        gradient,
        gradient_mask,
    };
    Ok((report, trace))
}

/// Sharpen, gray, invert, normalize, threshold, close, drop small
/// contours, label; separately derive the texture mask from the inverted
/// gray image; then classify each contour by texture density.
///
/// A constant image is not an error: it yields a report with no contours.
pub fn run_pipeline<T: Scalar>(img: &ColorImage, cfg: &PipelineConfig<T>) -> Result<DetectionReport<T>> {
    run_pipeline_traced(img, cfg).map(|(report, _)| report)
}
