//! Annotated copies of the input: contour outlines coloured by verdict.

use crate::detect::{run_pipeline_traced, DetectionReport, LabelMap, PipelineConfig};
use crate::error::{invalid, Result};
use crate::imgcore::ColorImage;
use crate::scalar::Scalar;

pub const FLAGGED_COLOR: [u8; 3] = [255, 0, 0];
pub const REJECTED_COLOR: [u8; 3] = [0, 255, 255];
pub const NO_DETECTION_BADGE: [u8; 3] = [0, 200, 0];
pub const BADGE_SIZE: usize = 8;

/// Contour pixels with a 4-neighbour outside their contour (or outside the
/// image).
pub fn is_boundary(lm: &LabelMap, x: usize, y: usize) -> bool {
    let l = lm.get(x, y);
    if l == 0 {
        return false;
    }
    if x == 0 || y == 0 || x + 1 == lm.width() || y + 1 == lm.height() {
        return true;
    }
    lm.get(x - 1, y) != l || lm.get(x + 1, y) != l || lm.get(x, y - 1) != l || lm.get(x, y + 1) != l
}

/// Outlines every contour of `lm`: flagged ones in [`FLAGGED_COLOR`], the
/// rest in [`REJECTED_COLOR`]. When nothing is flagged a small badge is
/// painted in the top-left corner.
pub fn render_overlay<T: Scalar>(img: &ColorImage, lm: &LabelMap, report: &DetectionReport<T>) -> Result<ColorImage> {
    if img.width() != lm.width() || img.height() != lm.height() {
        return Err(invalid("image and label map dimensions differ"));
    }
    if report.width != img.width() || report.height != img.height() {
        return Err(invalid("report does not match image dimensions"));
    }
    let mut flagged = vec![false; lm.count() as usize + 1];
    for c in &report.contours {
        if c.label as usize >= flagged.len() {
            return Err(invalid(format!("report contour {} is not in the label map", c.label)));
        }
        flagged[c.label as usize] = c.is_plasmodium;
    }

    let mut out = img.clone();
    for y in 0..lm.height() {
        for x in 0..lm.width() {
            if is_boundary(lm, x, y) {
                let color = if flagged[lm.get(x, y) as usize] { FLAGGED_COLOR } else { REJECTED_COLOR };
                out.set(x, y, color);
            }
        }
    }
    if !report.plasmodium_found {
        for y in 0..BADGE_SIZE.min(img.height()) {
            for x in 0..BADGE_SIZE.min(img.width()) {
                out.set(x, y, NO_DETECTION_BADGE);
            }
        }
    }
    Ok(out)
}

/// Rebuilds the label map by rerunning the pipeline with the report's own
/// config, checks that it reproduces the report's contours, then renders.
pub fn overlay<T: Scalar>(img: &ColorImage, report: &DetectionReport<T>) -> Result<ColorImage> {
    if report.width != img.width() || report.height != img.height() {
        return Err(invalid(format!(
            "report is for a {}x{} image, got {}x{}",
            report.width,
            report.height,
            img.width(),
            img.height()
        )));
    }
    let cfg: PipelineConfig<f64> = report.config.map_scalar(|v| v.as_f64());
    let (rerun, trace) = run_pipeline_traced(img, &cfg)?;
    let same = rerun.contours.len() == report.contours.len()
        && rerun.contours.iter().zip(&report.contours).all(|(a, b)| a.label == b.label && a.area == b.area);
    if !same {
        return Err(invalid("report contours do not match this image"));
    }
    render_overlay(img, &trace.labels, report)
}
