use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::imgcore::BinaryImage;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Connectivity {
    Four,
    #[default]
    Eight,
}

impl TryFrom<u8> for Connectivity {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            4 => Ok(Self::Four),
            8 => Ok(Self::Eight),
            _ => Err(invalid(format!("connectivity must be 4 or 8, got {v}"))),
        }
    }
}

impl From<Connectivity> for u8 {
    fn from(c: Connectivity) -> u8 {
        match c {
            Connectivity::Four => 4,
            Connectivity::Eight => 8,
        }
    }
}

/// Per-pixel component labels; `0` is background, contours are `1..=count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelMap {
    width: usize,
    height: usize,
    labels: Vec<u32>,
    count: u32,
}

/// Pixel count and coordinate sums of one labelled contour.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ComponentStats {
    pub area: usize,
    pub sum_x: u64,
    pub sum_y: u64,
}

impl ComponentStats {
    pub fn centroid(&self) -> (f64, f64) {
        let n = self.area as f64;
        (self.sum_x as f64 / n, self.sum_y as f64 / n)
    }
}

impl LabelMap {
    /// Wraps an externally produced label raster. Labels must use every
    /// value in `0..=max` (no gaps); connectivity is not checked.
    pub fn new(width: usize, height: usize, labels: Vec<u32>) -> Result<Self> {
        if width == 0 || height == 0 || labels.len() != width * height {
            return Err(invalid("label raster dimensions are inconsistent"));
        }
        let count = labels.iter().copied().max().unwrap_or(0);
        let mut seen = vec![false; count as usize + 1];
        for &l in &labels {
            seen[l as usize] = true;
        }
        if seen.iter().skip(1).any(|s| !s) {
            return Err(invalid("label values must be contiguous"));
        }
        Ok(Self { width, height, labels, count })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn count(&self) -> u32 {
        self.count
    }

    pub fn get(&self, x: usize, y: usize) -> u32 {
        self.labels[y * self.width + x]
    }

    /// Pixel count per label, indexed by label (entry 0 is background).
    pub fn areas(&self) -> Vec<usize> {
        let mut areas = vec![0; self.count as usize + 1];
        for &l in &self.labels {
            areas[l as usize] += 1;
        }
        areas
    }

    /// Statistics indexed by label; entry 0 is unused.
    pub fn stats(&self) -> Vec<ComponentStats> {
        let mut stats = vec![ComponentStats::default(); self.count as usize + 1];
        for (i, &l) in self.labels.iter().enumerate() {
            if l != 0 {
                let s = &mut stats[l as usize];
                s.area += 1;
                s.sum_x += (i % self.width) as u64;
                s.sum_y += (i / self.width) as u64;
            }
        }
        stats
    }

    pub fn foreground(&self) -> BinaryImage {
        BinaryImage::new(self.width, self.height, self.labels.iter().map(|&l| l != 0).collect())
            .expect("dimensions preserved")
    }
}

struct DisjointSet {
    parent: Vec<u32>,
}

impl DisjointSet {
    fn make(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        id
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) -> u32 {
        let (ra, rb) = (self.find(a), self.find(b));
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
        lo
    }
}

/// Two-pass union-find labelling. Final ids follow the raster order in
/// which each component is first met.
pub fn label_components(mask: &BinaryImage, connectivity: Connectivity) -> LabelMap {
    let (w, h) = (mask.width(), mask.height());
    let data = mask.data();
    let mut provisional = vec![0u32; w * h];
    let mut sets = DisjointSet { parent: vec![0] };

    let back: &[(isize, isize)] = match connectivity {
        Connectivity::Four => &[(-1, 0), (0, -1)],
        Connectivity::Eight => &[(-1, 0), (-1, -1), (0, -1), (1, -1)],
    };

    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if !data[i] {
                continue;
            }
            let mut current = 0u32;
            for &(dx, dy) in back {
                let (nx, ny) = (x as isize + dx, y as isize + dy);
                if nx < 0 || ny < 0 || nx >= w as isize {
                    continue;
                }
                let n = provisional[ny as usize * w + nx as usize];
                if n == 0 {
                    continue;
                }
                current = if current == 0 { n } else { sets.union(current, n) };
            }
            provisional[i] = if current == 0 { sets.make() } else { current };
        }
    }

    let mut final_id = vec![0u32; sets.parent.len()];
    let mut count = 0u32;
    for l in provisional.iter_mut() {
        if *l == 0 {
            continue;
        }
        let root = sets.find(*l) as usize;
        if final_id[root] == 0 {
            count += 1;
            final_id[root] = count;
        }
        *l = final_id[root];
    }
    LabelMap { width: w, height: h, labels: provisional, count }
}
