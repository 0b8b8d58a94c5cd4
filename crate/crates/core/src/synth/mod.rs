//! Synthetic blood smears with pixel-level ground truth.
//!
//! Red cells are smooth disks with soft rims, parasites are darker
//! irregular blobs with strong per-pixel texture. Everything is drawn
//! from a [`SplitMix64`] stream so a spec and seed pin the output bytes.

mod rng;
mod score;

pub use rng::SplitMix64;
pub use score::{score, Confusion, Metrics, Outcome};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::imgcore::{invert, to_gray, ColorImage, GrayImage};
use crate::texture::gradient_magnitude;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SmearSpec {
    pub width: usize,
    pub height: usize,
    pub rbc_count: usize,
    pub parasite_count: usize,
    /// Inclusive `[min, max]` radius in pixels.
    pub rbc_radius: [u32; 2],
    pub parasite_radius: [u32; 2],
    /// Width in pixels of the linear ramp at a red cell's rim.
    pub rbc_edge_softness: f64,
    /// Probability that a parasite is placed inside a red cell.
    pub hosted_fraction: f64,
    /// Gray level of the plasma background.
    pub background_level: u8,
    /// Peak-to-peak brightness change of a left-to-right illumination ramp.
    pub illumination_amplitude: u8,
    /// Half-width of the uniform per-pixel texture inside parasites.
    pub texture_amplitude: u8,
    /// Half-width of the uniform sensor noise added everywhere.
    pub noise_amplitude: u8,
    pub seed: u64,
}

impl Default for SmearSpec {
    fn default() -> Self {
        Self {
            width: 256,
            height: 256,
            rbc_count: 24,
            parasite_count: 1,
            rbc_radius: [11, 15],
            parasite_radius: [6, 9],
            rbc_edge_softness: 1.0,
            hosted_fraction: 0.5,
            background_level: 215,
            illumination_amplitude: 20,
            texture_amplitude: 60,
            noise_amplitude: 2,
            seed: 0,
        }
    }
}

impl SmearSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(invalid("smear dimensions must be positive"));
        }
        for (name, [lo, hi]) in [("rbc_radius", self.rbc_radius), ("parasite_radius", self.parasite_radius)] {
            if lo < 2 || lo > hi {
                return Err(invalid(format!("{name} must satisfy 2 <= min <= max")));
            }
        }
        if !(self.rbc_edge_softness > 0.0 && self.rbc_edge_softness.is_finite()) {
            return Err(invalid("rbc_edge_softness must be positive"));
        }
        if !(0.0..=1.0).contains(&self.hosted_fraction) {
            return Err(invalid("hosted_fraction must lie in [0, 1]"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectKind {
    Rbc,
    Parasite,
}

/// One horizontal span `[x_start, x_end)` on row `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "[u32; 3]", into = "[u32; 3]")]
pub struct Run {
    pub y: u32,
    pub x_start: u32,
    pub x_end: u32,
}

impl From<[u32; 3]> for Run {
    fn from([y, x_start, x_end]: [u32; 3]) -> Self {
        Self { y, x_start, x_end }
    }
}

impl From<Run> for [u32; 3] {
    fn from(r: Run) -> Self {
        [r.y, r.x_start, r.x_end]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruthObject {
    pub kind: ObjectKind,
    pub center: [f64; 2],
    pub radius: f64,
    /// Pixel mask as row runs, sorted by row.
    pub mask: Vec<Run>,
}

impl TruthObject {
    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.mask.iter().any(|r| r.y as usize == y && (r.x_start as usize..r.x_end as usize).contains(&x))
    }

    pub fn area(&self) -> usize {
        self.mask.iter().map(|r| (r.x_end - r.x_start) as usize).sum()
    }

    pub fn pixels(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.mask.iter().flat_map(|r| (r.x_start..r.x_end).map(move |x| (x as usize, r.y as usize)))
    }

    fn from_predicate(
        kind: ObjectKind,
        center: [f64; 2],
        radius: f64,
        bound: f64,
        (w, h): (usize, usize),
        inside: impl Fn(f64, f64) -> bool,
    ) -> Self {
        let y0 = (center[1] - bound).floor().max(0.0) as usize;
        let y1 = ((center[1] + bound).ceil() as usize).min(h - 1);
        let x0 = (center[0] - bound).floor().max(0.0) as usize;
        let x1 = ((center[0] + bound).ceil() as usize).min(w - 1);
        let mut mask = Vec::new();
        for y in y0..=y1 {
            let mut start = None;
            for x in x0..=x1 + 1 {
                let hit = x <= x1 && inside(x as f64 - center[0], y as f64 - center[1]);
                match (hit, start) {
                    (true, None) => start = Some(x),
                    (false, Some(s)) => {
                        mask.push(Run { y: y as u32, x_start: s as u32, x_end: x as u32 });
                        start = None;
                    }
                    _ => {}
                }
            }
        }
        Self { kind, center, radius, mask }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub width: usize,
    pub height: usize,
    pub seed: u64,
    pub objects: Vec<TruthObject>,
}

impl GroundTruth {
    pub fn parasites(&self) -> impl Iterator<Item = &TruthObject> {
        self.objects.iter().filter(|o| o.kind == ObjectKind::Parasite)
    }

    pub fn rbcs(&self) -> impl Iterator<Item = &TruthObject> {
        self.objects.iter().filter(|o| o.kind == ObjectKind::Rbc)
    }

    pub fn parasite_count(&self) -> usize {
        self.parasites().count()
    }

    fn kind_mask(&self, kind: ObjectKind) -> Vec<bool> {
        let mut m = vec![false; self.width * self.height];
        for o in self.objects.iter().filter(|o| o.kind == kind) {
            for (x, y) in o.pixels() {
                m[y * self.width + x] = true;
            }
        }
        m
    }
}

const RBC_TINT: [f64; 3] = [-22.0, -58.0, -44.0];
const PARASITE_COLOR: [f64; 3] = [112.0, 52.0, 138.0];
const PARASITE_LOBE_DEPTH: f64 = 0.2;
const PLACEMENT_TRIES: usize = 500;
const RENDER_ATTEMPTS: usize = 8;

struct Rbc {
    center: [f64; 2],
    radius: f64,
}

struct Parasite {
    center: [f64; 2],
    radius: f64,
    lobes: f64,
    phase: f64,
}

impl Parasite {
    fn reach(&self) -> f64 {
        self.radius * (1.0 + PARASITE_LOBE_DEPTH)
    }

    fn inside(&self, dx: f64, dy: f64) -> bool {
        let theta = dy.atan2(dx);
        let r = self.radius * (1.0 + PARASITE_LOBE_DEPTH * (self.lobes * theta + self.phase).sin());
        dx * dx + dy * dy <= r * r
    }
}

fn place_center(rng: &mut SplitMix64, reach: f64, (w, h): (usize, usize)) -> Option<[f64; 2]> {
    let margin = reach.ceil() as i64 + 1;
    if 2 * margin >= w as i64 || 2 * margin >= h as i64 {
        return None;
    }
    Some([rng.range_i64(margin, w as i64 - 1 - margin) as f64, rng.range_i64(margin, h as i64 - 1 - margin) as f64])
}

fn place_rbcs(spec: &SmearSpec, rng: &mut SplitMix64) -> Result<Vec<Rbc>> {
    let dims = (spec.width, spec.height);
    let mut cells: Vec<Rbc> = Vec::with_capacity(spec.rbc_count);
    for i in 0..spec.rbc_count {
        let radius = rng.range_i64(spec.rbc_radius[0] as i64, spec.rbc_radius[1] as i64) as f64;
        let mut placed = false;
        for _ in 0..PLACEMENT_TRIES {
            let center = place_center(rng, radius + spec.rbc_edge_softness, dims)
                .ok_or_else(|| Error::Placement(format!("red cell of radius {radius} does not fit the frame")))?;
            // neighbouring cells may touch but not overlap
            let clear = cells.iter().all(|c| {
                let d = ((c.center[0] - center[0]).powi(2) + (c.center[1] - center[1]).powi(2)).sqrt();
                d >= c.radius + radius + 1.0
            });
            if clear {
                cells.push(Rbc { center, radius });
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(Error::Placement(format!(
                "no free position for red cell {} of {} after {PLACEMENT_TRIES} tries",
                i + 1,
                spec.rbc_count
            )));
        }
    }
    Ok(cells)
}

fn place_parasites(spec: &SmearSpec, rbcs: &[Rbc], rng: &mut SplitMix64) -> Result<Vec<Parasite>> {
    let dims = (spec.width, spec.height);
    let mut out: Vec<Parasite> = Vec::with_capacity(spec.parasite_count);
    for i in 0..spec.parasite_count {
        let radius = rng.range_i64(spec.parasite_radius[0] as i64, spec.parasite_radius[1] as i64) as f64;
        let lobes = rng.range_i64(2, 3) as f64;
        let phase = rng.range_f64(0.0, std::f64::consts::TAU);
        let reach = radius * (1.0 + PARASITE_LOBE_DEPTH);
        let mut placed = false;
        for _ in 0..PLACEMENT_TRIES {
            let host = (!rbcs.is_empty() && rng.next_f64() < spec.hosted_fraction)
                .then(|| &rbcs[rng.range_i64(0, rbcs.len() as i64 - 1) as usize]);
            let center = match host {
                Some(c) => {
                    let jitter = (c.radius - reach).max(0.0);
                    let cx = (c.center[0] + rng.range_f64(-jitter, jitter)).round();
                    let cy = (c.center[1] + rng.range_f64(-jitter, jitter)).round();
                    let m = reach.ceil() + 1.0;
                    if cx < m || cy < m || cx > (spec.width as f64 - 1.0 - m) || cy > (spec.height as f64 - 1.0 - m) {
                        continue;
                    }
                    [cx, cy]
                }
                None => place_center(rng, reach, dims)
                    .ok_or_else(|| Error::Placement(format!("parasite of radius {radius} does not fit the frame")))?,
            };
            let dist = |c: [f64; 2]| ((c[0] - center[0]).powi(2) + (c[1] - center[1]).powi(2)).sqrt();
            let clear = out.iter().all(|p| dist(p.center) >= p.reach() + reach + 2.0)
                && (host.is_some()
                    || rbcs.iter().all(|c| dist(c.center) >= c.radius + spec.rbc_edge_softness + reach + 2.0));
            if clear {
                out.push(Parasite { center, radius, lobes, phase });
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(Error::Placement(format!(
                "no free position for parasite {} of {} after {PLACEMENT_TRIES} tries",
                i + 1,
                spec.parasite_count
            )));
        }
    }
    Ok(out)
}

fn render(spec: &SmearSpec, rbcs: &[Rbc], truth: &GroundTruth, rng: &mut SplitMix64) -> ColorImage {
    let (w, h) = (spec.width, spec.height);
    let mut coverage = vec![0.0f64; w * h];
    for c in rbcs {
        let reach = c.radius + spec.rbc_edge_softness;
        let y0 = (c.center[1] - reach).floor().max(0.0) as usize;
        let y1 = ((c.center[1] + reach).ceil() as usize).min(h - 1);
        let x0 = (c.center[0] - reach).floor().max(0.0) as usize;
        let x1 = ((c.center[0] + reach).ceil() as usize).min(w - 1);
        for y in y0..=y1 {
            for x in x0..=x1 {
                let d = ((x as f64 - c.center[0]).powi(2) + (y as f64 - c.center[1]).powi(2)).sqrt();
                let alpha = ((c.radius - d) / spec.rbc_edge_softness + 0.5).clamp(0.0, 1.0);
                let cov = &mut coverage[y * w + x];
                *cov = cov.max(alpha);
            }
        }
    }
    let parasite_mask = truth.kind_mask(ObjectKind::Parasite);

    let level = spec.background_level as f64;
    let background = [level + 12.0, level - 18.0, level - 3.0];
    let texture = spec.texture_amplitude as i64;
    let noise = spec.noise_amplitude as i64;
    let mut rgb = Vec::with_capacity(w * h * 3);
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let ramp = if w > 1 { x as f64 / (w - 1) as f64 - 0.5 } else { 0.0 };
            let illum = spec.illumination_amplitude as f64 * ramp;
            let n = rng.range_i64(-noise, noise) as f64;
            let px: [f64; 3] = if parasite_mask[i] {
                let t = rng.range_i64(-texture, texture) as f64;
                PARASITE_COLOR.map(|c| c + illum + t + n)
            } else {
                let a = coverage[i];
                [0, 1, 2].map(|k| background[k] + a * RBC_TINT[k] + illum + n)
            };
            rgb.extend(px.map(|v| v.round().clamp(0.0, 255.0) as u8));
        }
    }
    ColorImage::from_interleaved(w, h, &rgb).expect("buffer sized from spec")
}

/// Mean Sobel magnitude of the inverted gray image inside parasite masks
/// and inside red-cell masks (parasite pixels excluded). `None` for a kind
/// with no pixels.
pub fn texture_contrast(img: &ColorImage, truth: &GroundTruth) -> (Option<f64>, Option<f64>) {
    let gm = gradient_magnitude::<f64>(&invert(&to_gray(img)));
    let para = truth.kind_mask(ObjectKind::Parasite);
    let rbc = truth.kind_mask(ObjectKind::Rbc);
    let mean = |sel: &dyn Fn(usize) -> bool| {
        let (mut s, mut n) = (0.0, 0usize);
        for (i, &m) in gm.magnitude().iter().enumerate() {
            if sel(i) {
                s += m;
                n += 1;
            }
        }
        (n > 0).then(|| s / n as f64)
    };
    (mean(&|i| para[i]), mean(&|i| rbc[i] && !para[i]))
}

/// Draws a smear and its ground truth from `spec`.
///
/// Placement is retried (continuing the same random stream) when the
/// rendered parasites are not rougher than the red cells.
pub fn generate(spec: &SmearSpec) -> Result<(ColorImage, GroundTruth)> {
    spec.validate()?;
    let mut rng = SplitMix64::new(spec.seed);
    let dims = (spec.width, spec.height);
    for _ in 0..RENDER_ATTEMPTS {
        let rbcs = place_rbcs(spec, &mut rng)?;
        let parasites = place_parasites(spec, &rbcs, &mut rng)?;

        let mut objects: Vec<TruthObject> = rbcs
            .iter()
            .map(|c| {
                let r2 = c.radius * c.radius;
                TruthObject::from_predicate(ObjectKind::Rbc, c.center, c.radius, c.radius, dims, |dx, dy| {
                    dx * dx + dy * dy <= r2
                })
            })
            .collect();
        objects.extend(parasites.iter().map(|p| {
            TruthObject::from_predicate(ObjectKind::Parasite, p.center, p.radius, p.reach(), dims, |dx, dy| {
                p.inside(dx, dy)
            })
        }));
        let truth = GroundTruth { width: spec.width, height: spec.height, seed: spec.seed, objects };

        let img = render(spec, &rbcs, &truth, &mut rng);
        match texture_contrast(&img, &truth) {
            (Some(p), Some(r)) if p <= r => continue,
            _ => return Ok((img, truth)),
        }
    }
    Err(Error::Placement(format!("parasites not rougher than red cells after {RENDER_ATTEMPTS} attempts")))
}

/// Single-channel rendering of a truth mask, 255 inside objects of `kind`.
pub fn truth_mask(truth: &GroundTruth, kind: ObjectKind) -> GrayImage {
    let m = truth.kind_mask(kind);
    GrayImage::new(truth.width, truth.height, m.iter().map(|&b| if b { 255 } else { 0 }).collect())
        .expect("truth dimensions are positive")
}
