//! Raster types, histograms and the convolution engine shared by every filter.

mod convolve;
pub mod io;

pub use convolve::{clamp_to_gray, convolve, Kernel};

use crate::error::{invalid, Result};
use crate::scalar::Scalar;

fn check_dims(width: usize, height: usize, len: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(invalid(format!("image dimensions must be positive, got {width}x{height}")));
    }
    if len != width * height {
        return Err(invalid(format!("data length {len} does not match {width}x{height}")));
    }
    Ok(())
}

/// 8-bit single channel raster, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        check_dims(width, height, data.len())?;
        Ok(Self { width, height, data })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    /// Always false; images are non-empty by construction.
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    pub fn row(&self, y: usize) -> &[u8] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    pub fn map(&self, f: impl Fn(u8) -> u8) -> Self {
        Self { width: self.width, height: self.height, data: self.data.iter().map(|&v| f(v)).collect() }
    }

    /// Copies out the `w`×`h` window whose top-left corner is `(x0, y0)`.
    pub fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> Result<Self> {
        if x0 + w > self.width || y0 + h > self.height {
            return Err(invalid("crop window exceeds image bounds"));
        }
        let mut data = Vec::with_capacity(w * h);
        for y in y0..y0 + h {
            data.extend_from_slice(&self.row(y)[x0..x0 + w]);
        }
        Self::new(w, h, data)
    }

    /// Rotates a quarter turn clockwise.
    pub fn rotate90(&self) -> Self {
        let (w, h) = (self.width, self.height);
        let mut data = vec![0; w * h];
        for y in 0..h {
            for x in 0..w {
                // (x, y) -> (h - 1 - y, x) in a h-wide image
                data[x * h + (h - 1 - y)] = self.data[y * w + x];
            }
        }
        Self { width: h, height: w, data }
    }
}

/// Three-plane RGB raster.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColorImage {
    planes: [GrayImage; 3],
}

impl ColorImage {
    pub fn new(red: GrayImage, green: GrayImage, blue: GrayImage) -> Result<Self> {
        let (w, h) = (red.width, red.height);
        if [&green, &blue].iter().any(|p| p.width != w || p.height != h) {
            return Err(invalid("color planes must share dimensions"));
        }
        Ok(Self { planes: [red, green, blue] })
    }

    pub fn from_gray(gray: GrayImage) -> Self {
        Self { planes: [gray.clone(), gray.clone(), gray] }
    }

    /// Builds an image from interleaved `RGBRGB...` bytes.
    pub fn from_interleaved(width: usize, height: usize, rgb: &[u8]) -> Result<Self> {
        if rgb.len() != width * height * 3 {
            return Err(invalid("interleaved buffer length must be width*height*3"));
        }
        let plane = |c: usize| GrayImage::new(width, height, rgb.iter().skip(c).step_by(3).copied().collect());
        Self::new(plane(0)?, plane(1)?, plane(2)?)
    }

    pub fn to_interleaved(&self) -> Vec<u8> {
        let [r, g, b] = &self.planes;
        let mut out = Vec::with_capacity(r.len() * 3);
        for i in 0..r.len() {
            out.extend_from_slice(&[r.data[i], g.data[i], b.data[i]]);
        }
        out
    }

    pub fn width(&self) -> usize {
        self.planes[0].width
    }

    pub fn height(&self) -> usize {
        self.planes[0].height
    }

    pub fn planes(&self) -> &[GrayImage; 3] {
        &self.planes
    }

    pub fn plane(&self, channel: usize) -> &GrayImage {
        &self.planes[channel]
    }

    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        let i = y * self.width() + x;
        [self.planes[0].data[i], self.planes[1].data[i], self.planes[2].data[i]]
    }

    pub fn set(&mut self, x: usize, y: usize, rgb: [u8; 3]) {
        let i = y * self.width() + x;
        for (plane, v) in self.planes.iter_mut().zip(rgb) {
            plane.data[i] = v;
        }
    }

    pub fn map_planes(&self, f: impl Fn(&GrayImage) -> GrayImage) -> Self {
        let [r, g, b] = &self.planes;
        Self { planes: [f(r), f(g), f(b)] }
    }

    pub fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> Result<Self> {
        let [r, g, b] = &self.planes;
        Self::new(r.crop(x0, y0, w, h)?, g.crop(x0, y0, w, h)?, b.crop(x0, y0, w, h)?)
    }
}

/// Real-valued raster holding unclamped filter output.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedImage<T> {
    width: usize,
    height: usize,
    data: Vec<T>,
}

impl<T: Scalar> SignedImage<T> {
    pub fn new(width: usize, height: usize, data: Vec<T>) -> Result<Self> {
        check_dims(width, height, data.len())?;
        Ok(Self { width, height, data })
    }

    pub fn from_gray(img: &GrayImage) -> Self {
        Self { width: img.width, height: img.height, data: img.data.iter().map(|&v| T::from_u8(v).unwrap()).collect() }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> T {
        self.data[y * self.width + x]
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self { width: self.width, height: self.height, data: self.data.iter().map(|&v| f(v)).collect() }
    }

    /// Pixelwise combination of two same-sized images.
    pub fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        if self.width != other.width || self.height != other.height {
            return Err(invalid("image dimensions differ"));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { width: self.width, height: self.height, data })
    }
}

/// Foreground mask.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize, data: Vec<bool>) -> Result<Self> {
        check_dims(width, height, data.len())?;
        Ok(Self { width, height, data })
    }

    pub fn filled(width: usize, height: usize, value: bool) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.data[y * self.width + x] = v;
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().filter(|&&v| v).count()
    }

    pub fn complement(&self) -> Self {
        Self { width: self.width, height: self.height, data: self.data.iter().map(|&v| !v).collect() }
    }

    /// True when every foreground pixel of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.data.iter().zip(&other.data).all(|(&a, &b)| !a || b)
    }

    /// Embeds the mask in a larger canvas with `pad` pixels of `fill` on every side.
    pub fn padded(&self, pad: usize, fill: bool) -> Self {
        let w = self.width + 2 * pad;
        let h = self.height + 2 * pad;
        let mut data = vec![fill; w * h];
        for y in 0..self.height {
            let dst = (y + pad) * w + pad;
            data[dst..dst + self.width].copy_from_slice(&self.data[y * self.width..(y + 1) * self.width]);
        }
        Self { width: w, height: h, data }
    }

    pub fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> Result<Self> {
        if x0 + w > self.width || y0 + h > self.height {
            return Err(invalid("crop window exceeds mask bounds"));
        }
        let mut data = Vec::with_capacity(w * h);
        for y in y0..y0 + h {
            data.extend_from_slice(&self.data[y * self.width + x0..y * self.width + x0 + w]);
        }
        Self::new(w, h, data)
    }

    /// 0/255 rendering, handy for debugging and fixtures.
    pub fn to_gray(&self) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| if v { 255 } else { 0 }).collect(),
        }
    }
}

/// 256-bin intensity histogram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Histogram {
    bins: [u64; 256],
}

impl Histogram {
    pub fn bins(&self) -> &[u64; 256] {
        &self.bins
    }

    pub fn count(&self, value: u8) -> u64 {
        self.bins[value as usize]
    }

    pub fn total(&self) -> u64 {
        self.bins.iter().sum()
    }

    /// Sum of all intensities, exact.
    pub fn intensity_sum(&self) -> u64 {
        self.bins.iter().enumerate().map(|(v, &c)| v as u64 * c).sum()
    }
}

pub fn histogram(img: &GrayImage) -> Histogram {
    let mut bins = [0u64; 256];
    for &v in &img.data {
        bins[v as usize] += 1;
    }
    Histogram { bins }
}

pub fn invert(img: &GrayImage) -> GrayImage {
    img.map(|v| 255 - v)
}

/// Per-pixel `floor((R + G + B) / 3)`.
pub fn to_gray(img: &ColorImage) -> GrayImage {
    let [r, g, b] = &img.planes;
    let data = r
        .data
        .iter()
        .zip(&g.data)
        .zip(&b.data)
        .map(|((&r, &g), &b)| ((r as u16 + g as u16 + b as u16) / 3) as u8)
        .collect();
    GrayImage { width: r.width, height: r.height, data }
}

pub fn mean_intensity<T: Scalar>(img: &GrayImage) -> T {
    let sum: u64 = img.data.iter().map(|&v| v as u64).sum();
    T::from_count(sum) / T::from_count(img.len() as u64)
}
