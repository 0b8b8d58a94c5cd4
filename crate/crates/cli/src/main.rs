use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use smearscan::batch::{self, ScanJob, TileSize, EXIT_ALL_FAILED, EXIT_OK, EXIT_USAGE};
use smearscan::synth::SmearSpec;
use smearscan::PipelineConfig;

#[derive(Parser)]
#[command(name = "smearscan", version, about = "Detect malaria parasites in stained blood-film images")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the detector over images or directories of images.
    Scan(ScanArgs),
    /// Generate a synthetic smear corpus with ground truth.
    Synth(SynthArgs),
    /// Draw contour outlines for an image and its report.
    Overlay(OverlayArgs),
}

#[derive(Args)]
struct ScanArgs {
    /// PNG, PPM or PGM files, or directories containing them.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Pipeline config (JSON, every field optional).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Split each image into WxH tiles scanned in row-major order.
    #[arg(long, value_name = "WxH")]
    tile: Option<TileSize>,
    /// Also write `<id>.overlay.png` next to each report.
    #[arg(long)]
    overlay: bool,
    /// Exit with status 3 when any image is flagged.
    #[arg(long)]
    fail_on_detect: bool,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Overrides `ratio_factor` from the config.
    #[arg(long)]
    ratio_factor: Option<f64>,
    /// Overrides `min_area` from the config.
    #[arg(long)]
    min_area: Option<usize>,
}

#[derive(Args)]
struct SynthArgs {
    /// Number of samples.
    #[arg(short, long, default_value_t = 10)]
    n: usize,
    /// Seed of the first sample; sample i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Smear spec (JSON, every field optional).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "corpus")]
    out_dir: PathBuf,
    /// Overrides `parasite_count` from the spec.
    #[arg(long)]
    parasites: Option<usize>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct OverlayArgs {
    image: PathBuf,
    report: PathBuf,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("smearscan: {msg}");
    ExitCode::from(code)
}

fn load_config(args: &ScanArgs) -> smearscan::Result<PipelineConfig> {
    let mut cfg = match &args.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(k) = args.ratio_factor {
        cfg.ratio_factor = k;
    }
    if let Some(a) = args.min_area {
        cfg.min_area = a;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn scan(args: ScanArgs) -> ExitCode {
    let config = match load_config(&args) {
        Ok(c) => c,
        Err(e) => return fail(EXIT_USAGE, format!("bad config: {e}")),
    };
    let job = ScanJob {
        inputs: args.inputs,
        tile: args.tile,
        config,
        out_dir: args.out_dir,
        overlay: args.overlay,
        fail_on_detect: args.fail_on_detect,
        jobs: args.jobs,
    };
    match batch::scan(&job) {
        Ok(outcome) => {
            let s = &outcome.summary;
            for img in s.images.iter().filter(|i| i.error.is_some()) {
                eprintln!("smearscan: {}: {}", img.input, img.error.as_deref().unwrap_or_default());
            }
            println!("{} images, {} failed, {} with parasites", s.total, s.failed, s.positives);
            if s.total == 0 {
                eprintln!("smearscan: no input images found");
            }
            ExitCode::from(outcome.exit_code)
        }
        Err(e) => fail(EXIT_USAGE, e),
    }
}

fn synth(args: SynthArgs) -> ExitCode {
    let mut spec = match &args.config {
        Some(path) => match SmearSpec::load(path) {
            Ok(s) => s,
            Err(e) => return fail(EXIT_USAGE, format!("bad spec: {e}")),
        },
        None => SmearSpec::default(),
    };
    if let Some(p) = args.parasites {
        spec.parasite_count = p;
    }
    if let Err(e) = spec.validate() {
        return fail(EXIT_USAGE, format!("bad spec: {e}"));
    }
    match batch::synth_corpus(&spec, args.n, args.seed, &args.out_dir, args.jobs) {
        Ok(paths) => {
            println!("wrote {} samples to {}", paths.len(), args.out_dir.display());
            ExitCode::from(EXIT_OK)
        }
        Err(e) => fail(EXIT_USAGE, e),
    }
}

fn overlay_name(image: &Path) -> String {
    let stem = image.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "image".into());
    format!("{stem}.overlay.png")
}

fn overlay(args: OverlayArgs) -> ExitCode {
    if let Err(e) = std::fs::create_dir_all(&args.out_dir) {
        return fail(EXIT_USAGE, e);
    }
    let out = args.out_dir.join(overlay_name(&args.image));
    match batch::overlay_file(&args.image, &args.report, &out) {
        Ok(()) => {
            println!("{}", out.display());
            ExitCode::from(EXIT_OK)
        }
        Err(e) => fail(EXIT_ALL_FAILED, e),
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Scan(a) => scan(a),
        Command::Synth(a) => synth(a),
        Command::Overlay(a) => overlay(a),
    }
}
