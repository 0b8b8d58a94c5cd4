use super::{GrayImage, SignedImage};
use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// Square, odd-sized convolution kernel anchored at its center.
#[derive(Clone, Debug, PartialEq)]
pub struct Kernel<T> {
    size: usize,
    weights: Vec<T>,
}

impl<T: Scalar> Kernel<T> {
    pub fn new(size: usize, weights: Vec<T>) -> Result<Self> {
        if size.is_multiple_of(2) {
            return Err(invalid(format!("kernel size must be odd, got {size}")));
        }
        if weights.len() != size * size {
            return Err(invalid(format!("kernel of size {size} needs {} weights, got {}", size * size, weights.len())));
        }
        Ok(Self { size, weights })
    }

    pub fn from_ints(size: usize, weights: &[i32]) -> Result<Self> {
        Self::new(size, weights.iter().map(|&w| T::from_i32(w).unwrap()).collect())
    }

    pub fn identity3() -> Self {
        Self::from_ints(3, &[0, 0, 0, 0, 1, 0, 0, 0, 0]).unwrap()
    }

    /// 4-neighbour discrete Laplacian.
    pub fn laplacian4() -> Self {
        Self::from_ints(3, &[0, 1, 0, 1, -4, 1, 0, 1, 0]).unwrap()
    }

    /// Horizontal Sobel kernel. Under convolution (kernel flipped) it
    /// responds positively where intensity increases with `x`.
    pub fn sobel_x() -> Self {
        Self::from_ints(3, &[1, 0, -1, 2, 0, -2, 1, 0, -1]).unwrap()
    }

    /// Vertical Sobel kernel, positive where intensity increases with `y`.
    pub fn sobel_y() -> Self {
        Self::from_ints(3, &[1, 2, 1, 0, 0, 0, -1, -2, -1]).unwrap()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn radius(&self) -> usize {
        self.size / 2
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn weight(&self, row: usize, col: usize) -> T {
        self.weights[row * self.size + col]
    }
}

/// Discrete 2-D convolution with replicate padding.
///
/// `out(x, y) = Σ K[r + j][r + i] · f(x − i, y − j)` for `i, j ∈ [−r, r]`,
/// taps summed in kernel row-major order. No clamping is applied.
pub fn convolve<T: Scalar>(img: &GrayImage, kernel: &Kernel<T>) -> SignedImage<T> {
    let (w, h) = (img.width(), img.height());
    let r = kernel.radius();
    let size = kernel.size();
    let lut: Vec<T> = (0..=255u8).map(|v| T::from_u8(v).unwrap()).collect();

    // Each source row is widened once into a replicate-padded buffer.
    let padded_rows: Vec<Vec<T>> = (0..h)
        .map(|y| {
            let row = img.row(y);
            let mut buf = Vec::with_capacity(w + 2 * r);
            buf.extend(std::iter::repeat_n(lut[row[0] as usize], r));
            buf.extend(row.iter().map(|&v| lut[v as usize]));
            buf.extend(std::iter::repeat_n(lut[row[w - 1] as usize], r));
            buf
        })
        .collect();

    let mut out = vec![T::zero(); w * h];
    for (y, acc) in out.chunks_exact_mut(w).enumerate() {
        for kr in 0..size {
            // source row y - (kr - r), clamped into the image
            let sy = (y + r).saturating_sub(kr).min(h - 1);
            let src = &padded_rows[sy];
            for kc in 0..size {
                let wgt = kernel.weight(kr, kc);
                if wgt == T::zero() {
                    continue;
                }
                // padded index of f(x - (kc - r)) is x + 2r - kc
                let shift = 2 * r - kc;
                for (a, &s) in acc.iter_mut().zip(&src[shift..shift + w]) {
                    *a = *a + wgt * s;
                }
            }
        }
    }
    SignedImage::new(w, h, out).expect("dimensions preserved")
}

/// Rounds to nearest (half away from zero) and saturates into `[0, 255]`.
pub fn clamp_to_gray<T: Scalar>(img: &SignedImage<T>) -> GrayImage {
    let lo = T::zero();
    let hi = T::lit(255.0);
    let data = img
        .data()
        .iter()
        .map(|&v| {
            let v = v.round();
            if v.is_nan() || v <= lo {
                0
            } else if v >= hi {
                255
            } else {
                v.to_u8().unwrap()
            }
        })
        .collect();
    GrayImage::new(img.width(), img.height(), data).expect("dimensions preserved")
}
