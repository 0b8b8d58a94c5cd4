//! Sobel gradient magnitude and its binarization. Smooth red cells give
//! little response in their interior; the rough surface of a parasite
//! lights up.

use crate::error::{Error, Result};
use crate::imgcore::{convolve, BinaryImage, GrayImage, Kernel};
use crate::scalar::Scalar;
use crate::segment::{binarize, iterative_threshold};

#[derive(Clone, Debug, PartialEq)]
pub struct GradientMap<T> {
    width: usize,
    height: usize,
    magnitude: Vec<T>,
}

impl<T: Scalar> GradientMap<T> {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn magnitude(&self) -> &[T] {
        &self.magnitude
    }

    pub fn get(&self, x: usize, y: usize) -> T {
        self.magnitude[y * self.width + x]
    }

    /// Linear map of `[min, max]` onto `[0, 255]`, rounded to integers.
    /// `None` when the map is constant.
    pub fn rescaled(&self) -> Option<GrayImage> {
        let (lo, hi) =
            self.magnitude.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), &m| (lo.min(m), hi.max(m)));
        if !(hi > lo) {
            return None;
        }
        let scale = T::lit(255.0) / (hi - lo);
        let data = self.magnitude.iter().map(|&m| ((m - lo) * scale).round().to_u8().unwrap_or(255)).collect();
        Some(GrayImage::new(self.width, self.height, data).expect("dimensions preserved"))
    }
}

/// `sqrt(gx² + gy²)` from 3×3 Sobel convolutions with replicate border.
pub fn gradient_magnitude<T: Scalar>(img: &GrayImage) -> GradientMap<T> {
    let gx = convolve(img, &Kernel::<T>::sobel_x());
    let gy = convolve(img, &Kernel::<T>::sobel_y());
    let magnitude = gx.data().iter().zip(gy.data()).map(|(&a, &b)| (a * a + b * b).sqrt()).collect();
    GradientMap { width: img.width(), height: img.height(), magnitude }
}

/// Binary texture mask: the rescaled magnitude map thresholded with the
/// iterative two-class rule. A flat map yields an empty mask; the only
/// error is a non-positive `t0`.
pub fn gradient_binary<T: Scalar>(gm: &GradientMap<T>, t0: T) -> Result<BinaryImage> {
    if !(t0 > T::zero()) {
        return Err(Error::InvalidArgument("convergence tolerance must be positive".into()));
    }
    let empty = || BinaryImage::filled(gm.width, gm.height, false).expect("non-empty map");
    let Some(scaled) = gm.rescaled() else {
        return Ok(empty());
    };
    match iterative_threshold(&scaled, t0) {
        Ok(t) => Ok(binarize(&scaled, t.threshold)),
        Err(Error::DegenerateImage(_)) => Ok(empty()),
        Err(e) => Err(e),
    }
}
