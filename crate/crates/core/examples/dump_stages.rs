//! Writes every intermediate stage of one synthetic sample as PNG.
//!
//! cargo run --release -p smearscan --example dump_stages -- <out_dir> [seed] [parasites]

use std::path::PathBuf;

use smearscan::detect::run_pipeline_traced;
use smearscan::imgcore::io::{write_color, write_gray};
use smearscan::synth::{generate, SmearSpec};
use smearscan::PipelineConfig;

fn main() -> smearscan::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = PathBuf::from(args.next().unwrap_or_else(|| "stages".into()));
    let seed: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(2024);
    let parasites: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(1);
    std::fs::create_dir_all(&out)?;
    let (img, _) = generate(&SmearSpec { parasite_count: parasites, seed, ..SmearSpec::default() })?;
    let (report, trace) = run_pipeline_traced(&img, &PipelineConfig::default())?;
    write_color(&img, &out.join("0_input.png"))?;
    write_color(&trace.sharpened, &out.join("1_sharpened.png"))?;
    write_gray(&trace.inverted, &out.join("2_inverted.png"))?;
    write_gray(&trace.normalized, &out.join("3_normalized.png"))?;
    write_gray(&trace.foreground.to_gray(), &out.join("4_foreground.png"))?;
    write_gray(&trace.cleaned.to_gray(), &out.join("5_cleaned.png"))?;
    if let Some(g) = trace.gradient.rescaled() {
        write_gray(&g, &out.join("6_gradient.png"))?;
    }
    write_gray(&trace.gradient_mask.to_gray(), &out.join("7_gradient_mask.png"))?;
    println!("{}", report.to_json()?);
    Ok(())
}
