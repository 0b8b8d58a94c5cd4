//! Named oracle and property suites. Each returns `Err` with a
//! description of the first counterexample.

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::RngExt;
use smearscan::detect::{classify, label_components, Connectivity};
use smearscan::enhance::{sharpen, top_group_mean};
use smearscan::imgcore::{convolve, histogram, invert, GrayImage, Kernel};
use smearscan::morph::{close, dilate, erode};
use smearscan::segment::{binarize, class_means, iterative_threshold, MAX_ITERATIONS};
use smearscan::texture::gradient_magnitude;
use smearscan::{PipelineConfig, StructuringElement};

use super::fixtures::*;
use super::oracles;

pub type Suite = (&'static str, fn(u32) -> Result<(), String>);

/// Randomized cases per property.
pub const CASES: u32 = 1000;

pub const ORACLE_SUITES: &[Suite] = &[
    ("convolution matches quadruple loop (bit-exact)", convolution_oracle),
    ("sobel magnitude matches naive oracle (1e-9)", sobel_oracle),
    ("labeling matches flood fill (partition + count)", labeling_oracle),
    ("dilate/erode match set definitions", morphology_oracle),
    ("top_group_mean matches full sort (1e-9)", top_group_oracle),
];

pub const PROPERTY_SUITES: &[Suite] = &[
    ("invert is an involution", invert_involution),
    ("sharpen keeps constant images", sharpen_constant),
    ("closing is extensive", closing_extensive),
    ("closing is increasing", closing_increasing),
    ("closing is idempotent", closing_idempotent),
    ("erosion and dilation are dual", erosion_dilation_duality),
    ("threshold terminates at a fixed point", threshold_fixed_point),
    ("binarize counts pixels above T", binarize_count),
    ("contour densities add up to foreground texture", density_counting),
    ("raising k never adds detections", k_monotone),
    ("verdicts are translation invariant", translation_invariance),
];

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---- oracle suites; `n` is the number of random inputs ----

pub fn convolution_oracle(n: u32) -> Result<(), String> {
    let mut rng = rng(1);
    for case in 0..n {
        let img = random_gray(&mut rng, 16, 16);
        let size = if case % 2 == 0 { 3 } else { 5 };
        let random: Vec<i32> = (0..size * size).map(|_| rng.random_range(-9..=9)).collect();
        let mut kernels = vec![(size, random)];
        for k in [Kernel::<f64>::identity3(), Kernel::laplacian4(), Kernel::sobel_x(), Kernel::sobel_y()] {
            kernels.push((3, k.weights().iter().map(|&v| v as i32).collect()));
        }
        for (size, weights) in kernels {
            let wide: Vec<i64> = weights.iter().map(|&v| v as i64).collect();
            let expect = oracles::convolve(&img, size, &wide);
            let got64 = convolve(&img, &Kernel::<f64>::from_ints(size, &weights).unwrap());
            let got32 = convolve(&img, &Kernel::<f32>::from_ints(size, &weights).unwrap());
            for (i, &e) in expect.iter().enumerate() {
                ensure(got64.data()[i] == e as f64 && got32.data()[i] == e as f32, || {
                    format!("case {case}, kernel {weights:?}, pixel {i}: {} vs {e}", got64.data()[i])
                })?;
            }
        }
    }
    Ok(())
}

pub fn sobel_oracle(n: u32) -> Result<(), String> {
    let mut rng = rng(2);
    for case in 0..n {
        let (w, h) = if case < 100 { (16, 16) } else { (rng.random_range(1..24), rng.random_range(1..24)) };
        let img = random_gray(&mut rng, w, h);
        let expect = oracles::sobel(&img);
        let got = gradient_magnitude::<f64>(&img);
        for (i, (&a, &b)) in got.magnitude().iter().zip(&expect).enumerate() {
            ensure((a - b).abs() <= 1e-9, || format!("case {case}, pixel {i}: {a} vs {b}"))?;
        }
    }
    Ok(())
}

pub fn labeling_oracle(n: u32) -> Result<(), String> {
    let mut rng = rng(3);
    for case in 0..n {
        let (w, h) = (rng.random_range(1..=32), rng.random_range(1..=32));
        let density = rng.random_range(0.1..0.9);
        let mask = random_mask(&mut rng, w, h, density);
        for (conn, eight) in [(Connectivity::Eight, true), (Connectivity::Four, false)] {
            let lm = label_components(&mask, conn);
            let (expect, count) = oracles::flood_fill(&mask, eight);
            ensure(lm.count() == count, || format!("case {case} {conn:?}: {} components, oracle {count}", lm.count()))?;
            ensure(oracles::same_partition(lm.labels(), &expect), || {
                format!("case {case} {conn:?}: partitions differ")
            })?;
            ensure(lm.labels() == expect.as_slice(), || format!("case {case} {conn:?}: labels not in raster order"))?;
        }
    }
    Ok(())
}

fn random_se(rng: &mut rand::rngs::StdRng) -> StructuringElement {
    match rng.random_range(0..3) {
        0 => StructuringElement::square([1, 3, 5][rng.random_range(0..3)]).unwrap(),
        1 => StructuringElement::disk(rng.random_range(1..=3)),
        _ => {
            let s = [3, 5][rng.random_range(0..2)];
            let mut m: Vec<bool> = (0..s * s).map(|_| rng.random_bool(0.5)).collect();
            m[s * s / 2] = true;
            StructuringElement::custom(s, m).unwrap()
        }
    }
}

pub fn morphology_oracle(n: u32) -> Result<(), String> {
    let mut rng = rng(4);
    for case in 0..n {
        let (w, h) = (rng.random_range(1..=24), rng.random_range(1..=24));
        let density = rng.random_range(0.2..0.8);
        let mask = random_mask(&mut rng, w, h, density);
        let se = random_se(&mut rng);
        ensure(dilate(&mask, &se) == oracles::dilate(&mask, &se), || {
            format!("case {case}: dilation differs for {se:?}")
        })?;
        ensure(erode(&mask, &se) == oracles::erode(&mask, &se), || format!("case {case}: erosion differs for {se:?}"))?;
    }
    Ok(())
}

pub fn top_group_oracle(n: u32) -> Result<(), String> {
    let mut rng = rng(5);
    for case in 0..n {
        let (w, h) = if case < 100 { (16, 16) } else { (rng.random_range(1..40), rng.random_range(1..40)) };
        let img = random_gray(&mut rng, w, h);
        for fraction in [1.0 / 80.0, 0.1, 0.5, rng.random_range(0.001..0.999)] {
            let got: f64 = top_group_mean(&img, fraction).unwrap();
            let expect = oracles::top_group_mean(&img, fraction);
            ensure((got - expect).abs() <= 1e-9, || format!("case {case}, fraction {fraction}: {got} vs {expect}"))?;
        }
    }
    Ok(())
}

// ---- property suites; `cases` is the number of generated inputs ----

pub fn invert_involution(cases: u32) -> Result<(), String> {
    run(cases, gray_strategy(24), |img| {
        prop_assert_eq!(invert(&invert(&img)), img);
        Ok(())
    })
}

pub fn sharpen_constant(cases: u32) -> Result<(), String> {
    run(cases, (1usize..=24, 1usize..=24, any::<u8>()), |(w, h, v)| {
        let img = GrayImage::filled(w, h, v).unwrap();
        prop_assert_eq!(sharpen(&img), img);
        Ok(())
    })
}

pub fn closing_extensive(cases: u32) -> Result<(), String> {
    run(cases, (mask_strategy(20), se_strategy()), |(x, se)| {
        prop_assert!(x.is_subset_of(&close(&x, &se)));
        Ok(())
    })
}

pub fn closing_increasing(cases: u32) -> Result<(), String> {
    run(cases, (nested_masks(20), se_strategy()), |((x, y), se)| {
        prop_assert!(close(&x, &se).is_subset_of(&close(&y, &se)));
        Ok(())
    })
}

pub fn closing_idempotent(cases: u32) -> Result<(), String> {
    run(cases, (mask_strategy(20), se_strategy()), |(x, se)| {
        let once = close(&x, &se);
        prop_assert_eq!(close(&once, &se), once);
        Ok(())
    })
}

/// `¬(X ⊖ B) = ¬X ⊕ B̌`, with the complement taken over the unbounded
/// plane: the frame is padded by the element radius before complementing
/// so the outside counts as part of `¬X`.
pub fn erosion_dilation_duality(cases: u32) -> Result<(), String> {
    run(cases, (mask_strategy(20), se_strategy()), |(x, se)| {
        let pad = se.radius();
        let lhs = erode(&x, &se).complement();
        let outside = x.padded(pad, false).complement();
        let rhs = dilate(&outside, &se.reflect()).crop(pad, pad, x.width(), x.height()).unwrap();
        prop_assert_eq!(lhs, rhs);
        Ok(())
    })
}

pub fn threshold_fixed_point(cases: u32) -> Result<(), String> {
    let t0 = prop_oneof![Just(0.5f64), Just(0.01), Just(1.0), Just(3.7)];
    run(cases, (gray_strategy(24), t0), |(img, t0)| {
        let constant = img.data().iter().all(|&v| v == img.data()[0]);
        match iterative_threshold(&img, t0) {
            Err(_) => prop_assert!(constant),
            Ok(r) => {
                prop_assert!(!constant);
                prop_assert!(r.iterations <= MAX_ITERATIONS);
                let (mu1, mu2) = class_means(&histogram(&img), r.threshold);
                let next = 0.5 * (mu1.unwrap() + mu2.unwrap());
                if r.converged {
                    prop_assert!((next - r.threshold).abs() < t0);
                }
                let reference = oracles::iterate_threshold(img.data(), t0);
                prop_assert_eq!(reference, Some((r.threshold, r.iterations)));
            }
        }
        Ok(())
    })
}

pub fn binarize_count(cases: u32) -> Result<(), String> {
    run(cases, (gray_strategy(24), -10.0f64..270.0), |(img, t)| {
        let b = binarize(&img, t);
        let above = img.data().iter().filter(|&&v| v as f64 > t).count();
        let from_hist: u64 =
            histogram(&img).bins().iter().enumerate().filter(|(v, _)| *v as f64 > t).map(|(_, &c)| c).sum();
        prop_assert_eq!(b.count_ones(), above);
        prop_assert_eq!(above as u64, from_hist);
        prop_assert_eq!(b.count_ones() + b.complement().count_ones(), img.len());
        Ok(())
    })
}

fn small_config(min_area: usize, k: f64) -> PipelineConfig {
    PipelineConfig { min_area, ratio_factor: k, ..PipelineConfig::default() }
}

pub fn density_counting(cases: u32) -> Result<(), String> {
    run(cases, (mask_pair(24), any::<bool>()), |((fg, tex), eight)| {
        let conn = if eight { Connectivity::Eight } else { Connectivity::Four };
        let lm = label_components(&fg, conn);
        let report = classify(&lm, &tex, &PipelineConfig::default()).unwrap();
        let total: f64 = report.contours.iter().map(|c| c.local_value * c.area as f64).sum();
        let expect = fg.data().iter().zip(tex.data()).filter(|(&f, &t)| f && t).count();
        prop_assert!((total - expect as f64).abs() < 1e-6, "{} vs {}", total, expect);
        Ok(())
    })
}

pub fn k_monotone(cases: u32) -> Result<(), String> {
    run(cases, (mask_pair(24), 1.0f64..20.0, 0.0f64..20.0, 1usize..6), |((fg, tex), k1, dk, min_area)| {
        let lm = label_components(&fg, Connectivity::Eight);
        let lo = classify(&lm, &tex, &small_config(min_area, k1)).unwrap();
        let hi = classify(&lm, &tex, &small_config(min_area, k1 + dk)).unwrap();
        for (a, b) in lo.contours.iter().zip(&hi.contours) {
            prop_assert!(!b.is_plasmodium || a.is_plasmodium);
        }
        prop_assert!(!hi.plasmodium_found || lo.plasmodium_found);
        Ok(())
    })
}

pub fn translation_invariance(cases: u32) -> Result<(), String> {
    let input = (mask_pair(12), 0usize..8, 0usize..8, 0usize..8, 0usize..8, 1.5f64..8.0, 1usize..5);
    run(cases, input, |((fg, tex), ax, ay, bx, by, k, min_area)| {
        let (w, h) = (fg.width() + 8, fg.height() + 8);
        let cfg = small_config(min_area, k);
        let at = |dx, dy| {
            let lm = label_components(&embed(&fg, w, h, dx, dy), Connectivity::Eight);
            classify(&lm, &embed(&tex, w, h, dx, dy), &cfg).unwrap()
        };
        let (a, b) = (at(ax, ay), at(bx, by));
        prop_assert_eq!(a.global_value, b.global_value);
        prop_assert_eq!(a.contours.len(), b.contours.len());
        for (ca, cb) in a.contours.iter().zip(&b.contours) {
            prop_assert_eq!((ca.label, ca.area, ca.is_plasmodium), (cb.label, cb.area, cb.is_plasmodium));
            prop_assert_eq!(ca.local_value, cb.local_value);
            let shift = [bx as f64 - ax as f64, by as f64 - ay as f64];
            for ((pb, pa), d) in cb.centroid.iter().zip(&ca.centroid).zip(shift) {
                prop_assert!((pb - pa - d).abs() < 1e-9);
            }
        }
        prop_assert_eq!(a.plasmodium_found, b.plasmodium_found);
        Ok(())
    })
}
