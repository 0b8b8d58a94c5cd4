//! Iterative two-class mean thresholding and binarization.

use crate::error::{Error, Result};
use crate::imgcore::{histogram, BinaryImage, GrayImage, Histogram};
use crate::scalar::Scalar;

pub const MAX_ITERATIONS: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdResult<T> {
    pub threshold: T,
    pub iterations: usize,
    pub converged: bool,
}

/// Means of the pixels strictly above `t` and of those at or below it.
/// `None` for the upper class when it is empty.
pub fn class_means<T: Scalar>(hist: &Histogram, t: T) -> (Option<T>, Option<T>) {
    let (mut n_hi, mut s_hi, mut n_lo, mut s_lo) = (0u64, 0u64, 0u64, 0u64);
    for (v, &c) in hist.bins().iter().enumerate() {
        if T::from_usize(v).unwrap() > t {
            n_hi += c;
            s_hi += c * v as u64;
        } else {
            n_lo += c;
            s_lo += c * v as u64;
        }
    }
    let mean = |s: u64, n: u64| (n > 0).then(|| T::from_count(s) / T::from_count(n));
    (mean(s_hi, n_hi), mean(s_lo, n_lo))
}

/// Threshold selection over a histogram; see [`iterative_threshold`].
pub fn iterative_threshold_hist<T: Scalar>(hist: &Histogram, t0: T) -> Result<ThresholdResult<T>> {
    let total = hist.total();
    if total == 0 {
        return Err(Error::InvalidArgument("empty histogram".into()));
    }
    let mut t = T::from_count(hist.intensity_sum()) / T::from_count(total);
    let half = T::lit(0.5);
    for iterations in 1..=MAX_ITERATIONS {
        let (upper, lower) = class_means(hist, t);
        let (Some(mu1), Some(mu2)) = (upper, lower) else {
            return Err(Error::DegenerateImage("no pixel lies above the mean intensity".into()));
        };
        let next = half * (mu1 + mu2);
        if (next - t).abs() < t0 {
            return Ok(ThresholdResult { threshold: t, iterations, converged: true });
        }
        t = next;
    }
    Ok(ThresholdResult { threshold: t, iterations: MAX_ITERATIONS, converged: false })
}

/// Global threshold by the iterative two-class mean rule.
///
/// Starts from the mean intensity, splits pixels into `> T` and `<= T`,
/// and moves `T` to the midpoint of the two class means until a step
/// smaller than `t0` is seen. The returned threshold is the one whose
/// class split produced that small step, so it is a fixed point to
/// within `t0`. Constant images are rejected as degenerate.
pub fn iterative_threshold<T: Scalar>(img: &GrayImage, t0: T) -> Result<ThresholdResult<T>> {
    if !(t0 > T::zero()) {
        return Err(Error::InvalidArgument("convergence tolerance must be positive".into()));
    }
    iterative_threshold_hist(&histogram(img), t0)
}

/// Foreground is every pixel strictly brighter than `threshold`.
pub fn binarize<T: Scalar>(img: &GrayImage, threshold: T) -> BinaryImage {
    // first intensity that exceeds the threshold
    let cut = (0..=255u16).find(|&v| T::from_u16(v).unwrap() > threshold).unwrap_or(256);
    let data = img.data().iter().map(|&v| v as u16 >= cut).collect();
    BinaryImage::new(img.width(), img.height(), data).expect("dimensions preserved")
}
