use super::{LabelMap, PipelineConfig};
use crate::error::{invalid, Result};
use crate::imgcore::BinaryImage;
use crate::scalar::Scalar;

/// Decision for one labelled contour.
#[derive(Clone, Debug, PartialEq)]
pub struct ContourVerdict<T> {
    pub label: u32,
    pub area: usize,
    /// `[x, y]` in pixel coordinates.
    pub centroid: [T; 2],
    /// Share of the contour's pixels that are set in the texture mask.
    pub local_value: T,
    pub is_plasmodium: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DetectionReport<T> {
    pub image: String,
    pub width: usize,
    pub height: usize,
    /// Share of all image pixels set in the texture mask.
    pub global_value: T,
    /// Foreground threshold; `None` for blank tiles.
    pub threshold: Option<T>,
    pub contours: Vec<ContourVerdict<T>>,
    pub plasmodium_found: bool,
    pub config: PipelineConfig<T>,
}

impl<T: Scalar> DetectionReport<T> {
    pub fn flagged(&self) -> impl Iterator<Item = &ContourVerdict<T>> {
        self.contours.iter().filter(|c| c.is_plasmodium)
    }
}

/// Texture density test: the contour must be textured at all and at least
/// `ratio_factor` times denser than the image as a whole.
pub fn density_verdict<T: Scalar>(local_value: T, global_value: T, ratio_factor: T) -> bool {
    local_value > T::zero() && local_value >= ratio_factor * global_value
}

fn check_same_dims(lm: &LabelMap, mask: &BinaryImage) -> Result<()> {
    if lm.width() != mask.width() || lm.height() != mask.height() {
        return Err(invalid(format!(
            "label map is {}x{} but texture mask is {}x{}",
            lm.width(),
            lm.height(),
            mask.width(),
            mask.height()
        )));
    }
    Ok(())
}

pub fn global_density<T: Scalar>(mask: &BinaryImage) -> T {
    T::from_count(mask.count_ones() as u64) / T::from_count(mask.len() as u64)
}

pub fn contour_density<T: Scalar>(lm: &LabelMap, label: u32, mask: &BinaryImage) -> Result<T> {
    check_same_dims(lm, mask)?;
    if label == 0 || label > lm.count() {
        return Err(invalid(format!("unknown contour label {label}")));
    }
    let (mut area, mut ones) = (0u64, 0u64);
    for (&l, &m) in lm.labels().iter().zip(mask.data()) {
        if l == label {
            area += 1;
            ones += m as u64;
        }
    }
    Ok(T::from_count(ones) / T::from_count(area))
}

/// Evaluates every contour of `lm` against the texture mask in one pass.
///
/// Contours smaller than `cfg.min_area` are listed but never flagged.
/// The returned report has an empty image id and no threshold; the
/// pipeline fills those in.
pub fn classify<T: Scalar>(lm: &LabelMap, mask: &BinaryImage, cfg: &PipelineConfig<T>) -> Result<DetectionReport<T>> {
    check_same_dims(lm, mask)?;
    let global_value = global_density::<T>(mask);
    let stats = lm.stats();
    let mut ones = vec![0u64; stats.len()];
    for (&l, &m) in lm.labels().iter().zip(mask.data()) {
        ones[l as usize] += m as u64;
    }

    let contours: Vec<_> = (1..stats.len())
        .map(|label| {
            let s = &stats[label];
            let n = T::from_count(s.area as u64);
            let local_value = T::from_count(ones[label]) / n;
            let is_plasmodium = s.area >= cfg.min_area && density_verdict(local_value, global_value, cfg.ratio_factor);
            ContourVerdict {
                label: label as u32,
                area: s.area,
                centroid: [T::from_count(s.sum_x) / n, T::from_count(s.sum_y) / n],
                local_value,
                is_plasmodium,
            }
        })
        .collect();

    Ok(DetectionReport {
        image: String::new(),
        width: lm.width(),
        height: lm.height(),
        global_value,
        threshold: None,
        plasmodium_found: contours.iter().any(|c| c.is_plasmodium),
        contours,
        config: cfg.clone(),
    })
}
