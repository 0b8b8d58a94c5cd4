//! Runs the detector over a generated corpus and prints per-image results.
//!
//! cargo run --release -p smearscan --example corpus_eval -- [n] [seed] [spec-json]

use smearscan::synth::{generate, score, Confusion, SmearSpec};
use smearscan::{run_pipeline, PipelineConfig};

fn main() -> smearscan::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(100);
    let seed: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(2024);
    let base: SmearSpec = match args.next() {
        Some(json) => serde_json::from_str(&json)?,
        None => SmearSpec::default(),
    };
    let cfg = PipelineConfig::default();
    let mut confusion = Confusion::default();
    let (mut worst_positive, mut worst_negative) = (f64::INFINITY, 0.0f64);
    for i in 0..n {
        let parasites = if i % 2 == 0 { 1 + (i / 2) % 3 } else { 0 };
        let spec = SmearSpec { parasite_count: parasites, seed: seed + i as u64, ..base.clone() };
        let (img, truth) = generate(&spec)?;
        let report = run_pipeline(&img, &cfg)?;
        let m = score(&report, &truth);
        confusion.add(m.outcome);
        let best =
            report.contours.iter().map(|c| c.local_value / report.global_value.max(1e-12)).fold(0.0f64, f64::max);
        if parasites > 0 {
            worst_positive = worst_positive.min(best);
        } else {
            worst_negative = worst_negative.max(best);
        }
        println!(
            "{i:3} parasites={parasites} contours={:3} val={:.4} best_ratio={best:6.2} flagged={} matched={}/{} {:?}",
            report.contours.len(),
            report.global_value,
            m.flagged,
            m.matched_parasites,
            m.parasites,
            m.outcome
        );
    }
    println!("{confusion:?} accuracy={:.3}", confusion.accuracy());
    println!("lowest positive ratio {worst_positive:.2}, highest negative ratio {worst_negative:.2}");
    Ok(())
}
