//! Slow, obviously-correct reference implementations.

use std::collections::VecDeque;

use smearscan::imgcore::GrayImage;
use smearscan::{BinaryImage, StructuringElement};

fn clamp(v: isize, n: usize) -> usize {
    v.clamp(0, n as isize - 1) as usize
}

/// True 2-D convolution with replicate border, one pixel and one tap at a
/// time: `out(x, y) = Σ k(i, j) · img(x + r − j, y + r − i)`.
pub fn convolve(img: &GrayImage, size: usize, weights: &[i64]) -> Vec<i64> {
    let r = (size / 2) as isize;
    let (w, h) = (img.width(), img.height());
    let mut out = vec![0i64; w * h];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0i64;
            for i in 0..size {
                for j in 0..size {
                    let sx = clamp(x as isize + r - j as isize, w);
                    let sy = clamp(y as isize + r - i as isize, h);
                    acc += weights[i * size + j] * img.get(sx, sy) as i64;
                }
            }
            out[y * w + x] = acc;
        }
    }
    out
}

/// Sobel magnitude written out neighbour by neighbour.
pub fn sobel(img: &GrayImage) -> Vec<f64> {
    let (w, h) = (img.width(), img.height());
    let p = |x: isize, y: isize| img.get(clamp(x, w), clamp(y, h)) as f64;
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h as isize {
        for x in 0..w as isize {
            let gx = (p(x + 1, y - 1) + 2.0 * p(x + 1, y) + p(x + 1, y + 1))
                - (p(x - 1, y - 1) + 2.0 * p(x - 1, y) + p(x - 1, y + 1));
            let gy = (p(x - 1, y + 1) + 2.0 * p(x, y + 1) + p(x + 1, y + 1))
                - (p(x - 1, y - 1) + 2.0 * p(x, y - 1) + p(x + 1, y - 1));
            out.push((gx * gx + gy * gy).sqrt());
        }
    }
    out
}

/// Breadth-first flood fill started from each unvisited foreground pixel
/// in raster order.
pub fn flood_fill(mask: &BinaryImage, eight: bool) -> (Vec<u32>, u32) {
    let (w, h) = (mask.width(), mask.height());
    let mut labels = vec![0u32; w * h];
    let mut next = 0;
    let mut queue = VecDeque::new();
    for start in 0..w * h {
        if !mask.data()[start] || labels[start] != 0 {
            continue;
        }
        next += 1;
        labels[start] = next;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            let (x, y) = ((i % w) as isize, (i / w) as isize);
            for dy in -1..=1isize {
                for dx in -1..=1isize {
                    if (dx == 0 && dy == 0) || (!eight && dx != 0 && dy != 0) {
                        continue;
                    }
                    let (nx, ny) = (x + dx, y + dy);
                    if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                        continue;
                    }
                    let j = ny as usize * w + nx as usize;
                    if mask.data()[j] && labels[j] == 0 {
                        labels[j] = next;
                        queue.push_back(j);
                    }
                }
            }
        }
    }
    (labels, next)
}

/// Whether two labelings describe the same partition of the pixels: the
/// label correspondence must be a bijection and background must match.
pub fn same_partition(a: &[u32], b: &[u32]) -> bool {
    use std::collections::HashMap;
    let mut ab = HashMap::new();
    let mut ba = HashMap::new();
    a.iter()
        .zip(b)
        .all(|(&x, &y)| (x == 0) == (y == 0) && *ab.entry(x).or_insert(y) == y && *ba.entry(y).or_insert(x) == x)
}

fn member(img: &BinaryImage, x: isize, y: isize) -> bool {
    x >= 0 && y >= 0 && (x as usize) < img.width() && (y as usize) < img.height() && img.get(x as usize, y as usize)
}

fn cells(se: &StructuringElement) -> Vec<(isize, isize)> {
    let (n, r) = (se.size(), se.radius() as isize);
    (0..n * n).filter(|&i| se.mask()[i]).map(|i| ((i % n) as isize - r, (i / n) as isize - r)).collect()
}

/// `{p : ∃ b ∈ B, p − b ∈ X}`.
pub fn dilate(img: &BinaryImage, se: &StructuringElement) -> BinaryImage {
    let b = cells(se);
    BinaryImage::from_fn(img.width(), img.height(), |x, y| {
        b.iter().any(|&(dx, dy)| member(img, x as isize - dx, y as isize - dy))
    })
    .unwrap()
}

/// `{p : ∀ b ∈ B, p + b ∈ X}`, nothing outside the frame belongs to `X`.
pub fn erode(img: &BinaryImage, se: &StructuringElement) -> BinaryImage {
    let b = cells(se);
    BinaryImage::from_fn(img.width(), img.height(), |x, y| {
        b.iter().all(|&(dx, dy)| member(img, x as isize + dx, y as isize + dy))
    })
    .unwrap()
}

/// Sorts all pixels brightest first and averages the leading ones.
pub fn top_group_mean(img: &GrayImage, fraction: f64) -> f64 {
    let mut v: Vec<u8> = img.data().to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    let n = ((fraction * v.len() as f64).floor() as usize).max(1);
    v[..n].iter().map(|&p| p as f64).sum::<f64>() / n as f64
}

/// Two-class mean iteration over the raw pixel list. Returns the
/// threshold whose split moved by less than `t0`, and the step count.
pub fn iterate_threshold(pixels: &[u8], t0: f64) -> Option<(f64, usize)> {
    let mut t = pixels.iter().map(|&p| p as f64).sum::<f64>() / pixels.len() as f64;
    for step in 1..=256 {
        let (hi, lo): (Vec<f64>, Vec<f64>) = {
            let hi: Vec<f64> = pixels.iter().map(|&p| p as f64).filter(|&p| p > t).collect();
            let lo: Vec<f64> = pixels.iter().map(|&p| p as f64).filter(|&p| p <= t).collect();
            (hi, lo)
        };
        if hi.is_empty() || lo.is_empty() {
            return None;
        }
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let next = 0.5 * (mean(&hi) + mean(&lo));
        if (next - t).abs() < t0 {
            return Some((t, step));
        }
        t = next;
    }
    None
}

/// Pixels of `region` with a 4-neighbour outside it, found by eroding with
/// a plus-shaped element.
pub fn boundary(region: &BinaryImage) -> BinaryImage {
    let plus = StructuringElement::custom(3, vec![false, true, false, true, true, true, false, true, false]).unwrap();
    let inner = erode(region, &plus);
    BinaryImage::from_fn(region.width(), region.height(), |x, y| region.get(x, y) && !inner.get(x, y)).unwrap()
}
