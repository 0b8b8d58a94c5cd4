//! Random and hand-built inputs shared by the suites.

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use smearscan::imgcore::GrayImage;
use smearscan::{BinaryImage, StructuringElement};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_gray(rng: &mut StdRng, w: usize, h: usize) -> GrayImage {
    GrayImage::from_fn(w, h, |_, _| rng.random_range(0..=255u8)).unwrap()
}

pub fn random_mask(rng: &mut StdRng, w: usize, h: usize, density: f64) -> BinaryImage {
    BinaryImage::from_fn(w, h, |_, _| rng.random_bool(density)).unwrap()
}

/// Vertical split: left half `a`, right half `b`.
pub fn two_level(w: usize, h: usize, a: u8, b: u8) -> GrayImage {
    GrayImage::from_fn(w, h, |x, _| if x < w / 2 { a } else { b }).unwrap()
}

pub fn gray_strategy(max: usize) -> impl Strategy<Value = GrayImage> {
    (1..=max, 1..=max).prop_flat_map(|(w, h)| {
        proptest::collection::vec(any::<u8>(), w * h).prop_map(move |d| GrayImage::new(w, h, d).unwrap())
    })
}

pub fn mask_strategy(max: usize) -> impl Strategy<Value = BinaryImage> {
    (1..=max, 1..=max).prop_flat_map(|(w, h)| mask_of(w, h))
}

pub fn mask_of(w: usize, h: usize) -> impl Strategy<Value = BinaryImage> {
    proptest::collection::vec(any::<bool>(), w * h).prop_map(move |d| BinaryImage::new(w, h, d).unwrap())
}

/// Two masks on the same frame, the first contained in the second.
pub fn nested_masks(max: usize) -> impl Strategy<Value = (BinaryImage, BinaryImage)> {
    (1..=max, 1..=max).prop_flat_map(|(w, h)| {
        (mask_of(w, h), mask_of(w, h)).prop_map(|(a, extra)| {
            let b = BinaryImage::from_fn(a.width(), a.height(), |x, y| a.get(x, y) || extra.get(x, y)).unwrap();
            (a, b)
        })
    })
}

/// Squares, disks and arbitrary odd masks with the origin set.
pub fn se_strategy() -> impl Strategy<Value = StructuringElement> {
    prop_oneof![
        prop_oneof![Just(1usize), Just(3), Just(5)].prop_map(|s| StructuringElement::square(s).unwrap()),
        (1usize..=2).prop_map(StructuringElement::disk),
        prop_oneof![Just(3usize), Just(5)].prop_flat_map(|s| {
            proptest::collection::vec(any::<bool>(), s * s).prop_map(move |mut m| {
                m[s * s / 2] = true;
                StructuringElement::custom(s, m).unwrap()
            })
        }),
    ]
}

/// A frame with a random foreground and a random texture mask.
pub fn mask_pair(max: usize) -> impl Strategy<Value = (BinaryImage, BinaryImage)> {
    (1..=max, 1..=max).prop_flat_map(|(w, h)| (mask_of(w, h), mask_of(w, h)))
}

/// Copies `src` into an all-background frame at `(dx, dy)`.
pub fn embed(src: &BinaryImage, w: usize, h: usize, dx: usize, dy: usize) -> BinaryImage {
    BinaryImage::from_fn(w, h, |x, y| {
        x >= dx && y >= dy && x - dx < src.width() && y - dy < src.height() && src.get(x - dx, y - dy)
    })
    .unwrap()
}
