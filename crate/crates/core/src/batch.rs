//! Batch driver behind the command-line tool: scans images or tiled
//! slides, writes reports and overlays, and generates synthetic corpora.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::detect::{run_pipeline_traced, DetectionReport, PipelineConfig};
use crate::error::{invalid, Error, Result};
use crate::imgcore::io::{is_supported, read_color, write_color};
use crate::imgcore::ColorImage;
use crate::overlay::{overlay, render_overlay};
use crate::synth::{generate, SmearSpec};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ALL_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_DETECTED: u8 = 3;

pub const MIN_TILE: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TileSize {
    pub width: usize,
    pub height: usize,
}

impl TileSize {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width < MIN_TILE || height < MIN_TILE {
            return Err(invalid(format!("tiles must be at least {MIN_TILE}x{MIN_TILE}, got {width}x{height}")));
        }
        Ok(Self { width, height })
    }
}

impl FromStr for TileSize {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (w, h) =
            s.split_once(['x', 'X']).ok_or_else(|| invalid(format!("tile size must look like WxH, got {s:?}")))?;
        let parse = |v: &str| v.trim().parse::<usize>().map_err(|_| invalid(format!("bad tile dimension {v:?}")));
        Self::new(parse(w)?, parse(h)?)
    }
}

impl fmt::Display for TileSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

/// Row-major tile windows `(row, col, x, y, w, h)`; edge tiles are clipped.
pub fn tile_grid(width: usize, height: usize, tile: TileSize) -> Vec<(usize, usize, usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for (row, y) in (0..height).step_by(tile.height).enumerate() {
        for (col, x) in (0..width).step_by(tile.width).enumerate() {
            out.push((row, col, x, y, tile.width.min(width - x), tile.height.min(height - y)));
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct ScanJob {
    pub inputs: Vec<PathBuf>,
    pub tile: Option<TileSize>,
    pub config: PipelineConfig<f64>,
    pub out_dir: PathBuf,
    pub overlay: bool,
    pub fail_on_detect: bool,
    pub jobs: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImageSummary {
    pub input: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub reports: Vec<String>,
    pub plasmodium_found: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanSummary {
    pub images: Vec<ImageSummary>,
    pub total: usize,
    pub failed: usize,
    pub positives: usize,
}

#[derive(Clone, Debug)]
pub struct ScanOutcome {
    pub exit_code: u8,
    pub summary: ScanSummary,
}

/// Directories expand to their supported image files, sorted by name.
pub fn expand_inputs(inputs: &[PathBuf]) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut files: Vec<PathBuf> = std::fs::read_dir(p)
                .map(|rd| {
                    rd.filter_map(|e| e.ok().map(|e| e.path())).filter(|f| f.is_file() && is_supported(f)).collect()
                })
                .unwrap_or_default();
            files.sort();
            out.extend(files);
        } else {
            out.push(p.clone());
        }
    }
    out
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "image".into())
}

fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| invalid(format!("cannot start worker pool: {e}")))
}

struct WorkItem<'a> {
    input: usize,
    id: String,
    image: &'a ColorImage,
    window: Option<(usize, usize, usize, usize)>,
}

fn process(item: &WorkItem<'_>, job: &ScanJob) -> Result<(String, bool)> {
    let cropped;
    let img = match item.window {
        Some((x, y, w, h)) => {
            cropped = item.image.crop(x, y, w, h)?;
            &cropped
        }
        None => item.image,
    };
    let (mut report, trace) = run_pipeline_traced(img, &job.config)?;
    report.image = item.id.clone();
    let name = format!("{}.report.json", item.id);
    std::fs::write(job.out_dir.join(&name), report.to_json()?)?;
    if job.overlay {
        let annotated = render_overlay(img, &trace.labels, &report)?;
        write_color(&annotated, &job.out_dir.join(format!("{}.overlay.png", item.id)))?;
    }
    Ok((name, report.plasmodium_found))
}

/// Runs the pipeline over every input (or every tile of every input, in
/// row-major order) and writes `<id>.report.json` files plus
/// `summary.json` to the output directory.
///
/// Per-file failures are recorded in the summary. The returned error is
/// reserved for problems with the job itself, such as an unusable output
/// directory.
pub fn scan(job: &ScanJob) -> Result<ScanOutcome> {
    job.config.validate()?;
    std::fs::create_dir_all(&job.out_dir)?;
    let pool = thread_pool(job.jobs)?;
    let files = expand_inputs(&job.inputs);

    let decoded: Vec<Result<ColorImage>> = pool.install(|| files.par_iter().map(|p| read_color(p)).collect());

    let mut items = Vec::new();
    for (input, img) in decoded.iter().enumerate() {
        let Ok(img) = img else { continue };
        let base = stem(&files[input]);
        match job.tile {
            None => items.push(WorkItem { input, id: base, image: img, window: None }),
            Some(tile) => {
                for (row, col, x, y, w, h) in tile_grid(img.width(), img.height(), tile) {
                    items.push(WorkItem {
                        input,
                        id: format!("{base}_r{row:03}_c{col:03}"),
                        image: img,
                        window: Some((x, y, w, h)),
                    });
                }
            }
        }
    }

    let results: Vec<Result<(String, bool)>> = pool.install(|| items.par_iter().map(|it| process(it, job)).collect());

    let mut images: Vec<ImageSummary> = files
        .iter()
        .zip(&decoded)
        .map(|(path, d)| ImageSummary {
            input: path.display().to_string(),
            status: if d.is_ok() { "ok" } else { "error" },
            error: d.as_ref().err().map(|e| e.to_string()),
            reports: Vec::new(),
            plasmodium_found: false,
        })
        .collect();
    for (item, res) in items.iter().zip(results) {
        let entry = &mut images[item.input];
        match res {
            Ok((name, found)) => {
                entry.reports.push(name);
                entry.plasmodium_found |= found;
            }
            Err(e) => {
                entry.status = "error";
                entry.error.get_or_insert_with(|| format!("{}: {e}", item.id));
            }
        }
    }

    let failed = images.iter().filter(|s| s.status == "error").count();
    let positives = images.iter().filter(|s| s.plasmodium_found).count();
    let summary = ScanSummary { total: images.len(), failed, positives, images };
    let mut text = serde_json::to_string_pretty(&summary)?;
    text.push('\n');
    std::fs::write(job.out_dir.join("summary.json"), text)?;

    let exit_code = if summary.total == 0 || failed == summary.total {
        EXIT_ALL_FAILED
    } else if job.fail_on_detect && positives > 0 {
        EXIT_DETECTED
    } else {
        EXIT_OK
    };
    Ok(ScanOutcome { exit_code, summary })
}

/// Writes `n` samples `sample_NNNN.png` with ground-truth sidecars
/// `sample_NNNN.json`; sample `i` uses seed `seed + i`.
pub fn synth_corpus(spec: &SmearSpec, n: usize, seed: u64, out_dir: &Path, jobs: usize) -> Result<Vec<PathBuf>> {
    if n == 0 {
        return Err(invalid("corpus size must be at least 1"));
    }
    std::fs::create_dir_all(out_dir)?;
    let pool = thread_pool(jobs)?;
    pool.install(|| {
        (0..n)
            .into_par_iter()
            .map(|i| {
                let spec = SmearSpec { seed: seed.wrapping_add(i as u64), ..spec.clone() };
                let (img, truth) = generate(&spec)?;
                let path = out_dir.join(format!("sample_{i:04}.png"));
                write_color(&img, &path)?;
                let mut text = serde_json::to_string_pretty(&truth)?;
                text.push('\n');
                std::fs::write(out_dir.join(format!("sample_{i:04}.json")), text)?;
                Ok(path)
            })
            .collect()
    })
}

/// Renders the overlay for an image and a previously written report.
pub fn overlay_file(image: &Path, report: &Path, out: &Path) -> Result<()> {
    let img = read_color(image)?;
    let report = DetectionReport::<f64>::from_json(&std::fs::read_to_string(report)?)?;
    write_color(&overlay(&img, &report)?, out)
}
