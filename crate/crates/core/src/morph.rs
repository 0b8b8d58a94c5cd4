//! Binary dilation, erosion and closing, plus small-component removal.

use serde::{Deserialize, Serialize};

use crate::detect::{label_components, Connectivity};
use crate::error::{invalid, Result};
use crate::imgcore::BinaryImage;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeShape {
    Square,
    Disk,
    Custom,
}

/// Odd-sized binary neighbourhood with its origin at the center cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StructuringElement {
    size: usize,
    mask: Vec<bool>,
    shape: SeShape,
}

impl StructuringElement {
    pub fn square(size: usize) -> Result<Self> {
        Self::build(size, vec![true; size * size], SeShape::Square)
    }

    /// Euclidean disk of the given radius, `size = 2·radius + 1`.
    pub fn disk(radius: usize) -> Self {
        let size = 2 * radius + 1;
        let r = radius as isize;
        let mask = (0..size * size)
            .map(|i| {
                let dy = (i / size) as isize - r;
                let dx = (i % size) as isize - r;
                dx * dx + dy * dy <= r * r
            })
            .collect();
        Self { size, mask, shape: SeShape::Disk }
    }

    pub fn custom(size: usize, mask: Vec<bool>) -> Result<Self> {
        Self::build(size, mask, SeShape::Custom)
    }

    fn build(size: usize, mask: Vec<bool>, shape: SeShape) -> Result<Self> {
        if size.is_multiple_of(2) {
            return Err(invalid(format!("structuring element size must be odd, got {size}")));
        }
        if mask.len() != size * size {
            return Err(invalid("structuring element mask must have size² cells"));
        }
        if !mask[size * size / 2] {
            return Err(invalid("structuring element origin must be set"));
        }
        Ok(Self { size, mask, shape })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn radius(&self) -> usize {
        self.size / 2
    }

    pub fn shape(&self) -> SeShape {
        self.shape
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// Point reflection through the origin.
    pub fn reflect(&self) -> Self {
        Self { size: self.size, mask: self.mask.iter().rev().copied().collect(), shape: self.shape }
    }

    /// Offsets `(dx, dy)` of the set cells relative to the origin.
    pub fn offsets(&self) -> Vec<(isize, isize)> {
        let r = self.radius() as isize;
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| ((i % self.size) as isize - r, (i / self.size) as isize - r))
            .collect()
    }
}

impl Default for StructuringElement {
    fn default() -> Self {
        Self::square(3).unwrap()
    }
}

/// ORs (or ANDs) every row of `src` shifted by each offset into `out`.
/// Pixels pulled from outside the image read as background.
fn shifted_combine(src: &BinaryImage, shifts: &[(isize, isize)], union: bool) -> BinaryImage {
    let (w, h) = (src.width() as isize, src.height() as isize);
    let data = src.data();
    let mut out = vec![!union; data.len()];
    for &(sx, sy) in shifts {
        // out[x, y] combines src[x + sx, y + sy]
        for y in 0..h {
            let row = &mut out[(y * w) as usize..((y + 1) * w) as usize];
            let yy = y + sy;
            if yy < 0 || yy >= h {
                if !union {
                    row.fill(false);
                }
                continue;
            }
            let src_row = &data[(yy * w) as usize..((yy + 1) * w) as usize];
            let x_lo = (-sx).clamp(0, w);
            let x_hi = (w - sx).clamp(0, w);
            if union {
                for x in x_lo..x_hi {
                    row[x as usize] |= src_row[(x + sx) as usize];
                }
            } else {
                row[..x_lo as usize].fill(false);
                row[x_hi as usize..].fill(false);
                for x in x_lo..x_hi {
                    row[x as usize] &= src_row[(x + sx) as usize];
                }
            }
        }
    }
    BinaryImage::new(src.width(), src.height(), out).expect("dimensions preserved")
}

/// `out(p) = 1` iff `img(p − b) = 1` for some `b` in the element.
pub fn dilate(img: &BinaryImage, se: &StructuringElement) -> BinaryImage {
    let shifts: Vec<_> = se.offsets().into_iter().map(|(dx, dy)| (-dx, -dy)).collect();
    shifted_combine(img, &shifts, true)
}

/// `out(p) = 1` iff `img(p + b) = 1` for every `b` in the element; the
/// outside of the image counts as background.
pub fn erode(img: &BinaryImage, se: &StructuringElement) -> BinaryImage {
    shifted_combine(img, &se.offsets(), false)
}

/// Dilation followed by erosion, evaluated as if the mask continued with
/// background beyond its edges. The dilation is allowed to spill past the
/// border before eroding, so closing stays extensive at the image edge.
pub fn close(img: &BinaryImage, se: &StructuringElement) -> BinaryImage {
    let pad = se.radius();
    let closed = erode(&dilate(&img.padded(pad, false), se), se);
    closed.crop(pad, pad, img.width(), img.height()).expect("crop inside padded canvas")
}

/// Clears every 8-connected component smaller than `min_area` pixels.
pub fn remove_small_contours(img: &BinaryImage, min_area: usize) -> BinaryImage {
    if min_area == 0 {
        return img.clone();
    }
    let labels = label_components(img, Connectivity::Eight);
    let areas = labels.areas();
    let data = labels.labels().iter().map(|&l| l != 0 && areas[l as usize] >= min_area).collect();
    BinaryImage::new(img.width(), img.height(), data).expect("dimensions preserved")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(w: usize, h: usize, px: usize, py: usize) -> BinaryImage {
        BinaryImage::from_fn(w, h, |x, y| (x, y) == (px, py)).unwrap()
    }

    #[test]
    fn dilate_point_gives_block() {
        let out = dilate(&point(5, 5, 2, 2), &StructuringElement::default());
        let expect = BinaryImage::from_fn(5, 5, |x, y| (1..=3).contains(&x) && (1..=3).contains(&y)).unwrap();
        assert_eq!(out, expect);
        let zero = BinaryImage::filled(4, 4, false).unwrap();
        assert_eq!(dilate(&zero, &StructuringElement::default()), zero);
    }

    #[test]
    fn dilation_uses_reflected_element() {
        // element covering origin and its right neighbour
        let mut mask = vec![false; 9];
        mask[4] = true;
        mask[5] = true;
        let se = StructuringElement::custom(3, mask).unwrap();
        let out = dilate(&point(5, 1, 2, 0), &se);
        // {p : p - b in X} = {2, 3}
        assert_eq!(out.data(), &[false, false, true, true, false]);
        let out = erode(&BinaryImage::new(5, 1, vec![false, true, true, false, false]).unwrap(), &se);
        // {p : p + b in X for all b} = {1}
        assert_eq!(out.data(), &[false, true, false, false, false]);
    }

    #[test]
    fn erode_border_and_isolated_point() {
        let ones = BinaryImage::filled(5, 4, true).unwrap();
        let out = erode(&ones, &StructuringElement::default());
        let expect = BinaryImage::from_fn(5, 4, |x, y| x > 0 && x < 4 && y > 0 && y < 3).unwrap();
        assert_eq!(out, expect);
        assert_eq!(erode(&point(5, 5, 2, 2), &StructuringElement::default()).count_ones(), 0);
    }

    #[test]
    fn closing_fills_gap_in_strip() {
        let strip = BinaryImage::new(5, 1, vec![false, true, false, true, false]).unwrap();
        let out = close(&strip, &StructuringElement::default());
        assert_eq!(out.data(), &[false, true, true, true, false]);
        let zero = BinaryImage::filled(6, 6, false).unwrap();
        assert_eq!(close(&zero, &StructuringElement::default()), zero);
    }

    #[test]
    fn closing_keeps_full_mask() {
        let ones = BinaryImage::filled(6, 5, true).unwrap();
        assert_eq!(close(&ones, &StructuringElement::disk(2)), ones);
    }

    #[test]
    fn small_contours_removed() {
        let img =
            BinaryImage::from_fn(30, 20, |x, y| (x < 3 && y == 0) || ((10..22).contains(&x) && (5..15).contains(&y)))
                .unwrap();
        assert_eq!(remove_small_contours(&img, 0), img);
        let out = remove_small_contours(&img, 50);
        assert_eq!(out.count_ones(), 120);
        assert!(!out.get(0, 0));
    }

    #[test]
    fn element_validation() {
        assert!(StructuringElement::square(4).is_err());
        let mut mask = vec![true; 9];
        mask[4] = false;
        assert!(StructuringElement::custom(3, mask).is_err());
        let d = StructuringElement::disk(2);
        assert_eq!(d.size(), 5);
        assert_eq!(d.offsets().len(), 13);
    }
}
