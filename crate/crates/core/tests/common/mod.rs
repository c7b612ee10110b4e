#![allow(dead_code)]

use std::path::PathBuf;

use helix48::image_codec::pgm::parse_pgm;
use helix48::image_codec::ImagePlane;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FIXTURES: [&str; 3] = ["camera", "moon", "astronaut"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(format!("{name}.pgm"))
}

pub fn fixture(name: &str) -> ImagePlane {
    parse_pgm(&std::fs::read(fixture_path(name)).unwrap()).unwrap()
}

/// Bernoulli(p) bits.
pub fn bernoulli(rng: &mut impl Rng, n: usize, p: f64) -> Vec<bool> {
    (0..n).map(|_| rng.gen_bool(p)).collect()
}

pub fn random_bytes(rng: &mut impl Rng, len: usize) -> Vec<u8> {
    let mut v = vec![0u8; len];
    rng.fill(&mut v[..]);
    v
}

/// Bytes with a skewed, compressible distribution.
pub fn skewed_bytes(rng: &mut impl Rng, len: usize) -> Vec<u8> {
    (0..len)
        .map(|_| if rng.gen_bool(0.9) { b'a' } else { rng.gen() })
        .collect()
}

pub fn noise_image(rng: &mut impl Rng, w: usize, h: usize) -> ImagePlane {
    ImagePlane::new(w, h, (0..w * h).map(|_| rng.gen()).collect()).unwrap()
}

/// Smooth gradient with mild noise, closer to natural image statistics.
pub fn smooth_image(rng: &mut impl Rng, w: usize, h: usize) -> ImagePlane {
    let (fx, fy) = (rng.gen_range(0.01..0.2), rng.gen_range(0.01..0.2));
    let samples = (0..w * h)
        .map(|i| {
            let (x, y) = ((i % w) as f64, (i / w) as f64);
            let v =
                128.0 + 60.0 * (fx * x).sin() + 50.0 * (fy * y).cos() + rng.gen_range(-6.0..6.0);
            v.clamp(0.0, 255.0) as u8
        })
        .collect();
    ImagePlane::new(w, h, samples).unwrap()
}

/// Largest usable decomposition depth for a size, capped at `max`.
pub fn levels_for(w: usize, h: usize, max: u8) -> u8 {
    let mut l = 0;
    while l < max && (w >> (l + 1)) >= 1 && (h >> (l + 1)) >= 1 {
        l += 1;
    }
    l
}
