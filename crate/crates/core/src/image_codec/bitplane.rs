//! Significance / sign / refinement coding of one band's bit planes through
//! the base-48 arithmetic coder.
//!
//! Planes are visited from the most significant down, coefficients in raster
//! order. A coefficient that is not yet significant has its plane bit coded
//! under one of three significance contexts chosen by how many of its eight
//! neighbours are already significant (0, 1, 2+). When it becomes significant
//! its sign follows under a dedicated context. Significant coefficients code
//! refinement bits under a single context.

use crate::arith48::{BinaryModel, Decoder, Encoder};
use crate::constrained_code::{Digit48, DigitStream};

use super::dwt::BandGeometry;
use super::quant::{QuantizedBand, Step};

const SIGN_CTX: usize = 3;
const REFINE_CTX: usize = 4;
pub const CONTEXTS_PER_BAND: usize = 5;

/// Bits of each plane, most significant first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitPlaneSet {
    pub n_planes: u8,
    pub planes: Vec<Vec<bool>>,
}

pub fn bit_planes(magnitudes: &[u32]) -> BitPlaneSet {
    let max = magnitudes.iter().copied().max().unwrap_or(0);
    let n_planes = (32 - max.leading_zeros()) as u8;
    let planes = (0..n_planes)
        .rev()
        .map(|p| magnitudes.iter().map(|&m| (m >> p) & 1 == 1).collect())
        .collect();
    BitPlaneSet { n_planes, planes }
}

/// ORs the weighted planes back into magnitudes.
pub fn compose_planes(set: &BitPlaneSet, len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for (i, plane) in set.planes.iter().enumerate() {
        let weight = set.n_planes as usize - 1 - i;
        for (m, &b) in out.iter_mut().zip(plane) {
            *m |= (b as u32) << weight;
        }
    }
    out
}

fn significance_context(sig: &[bool], w: usize, h: usize, x: usize, y: usize) -> usize {
    let mut n = 0;
    for ny in y.saturating_sub(1)..=(y + 1).min(h - 1) {
        for nx in x.saturating_sub(1)..=(x + 1).min(w - 1) {
            if (nx, ny) != (x, y) && sig[ny * w + nx] {
                n += 1;
                if n == 2 {
                    return 2;
                }
            }
        }
    }
    n
}

/// Codes the top `planes_kept` planes of `q` into `enc`. Returns the number
/// of binary decisions coded.
pub fn encode_band_into(q: &QuantizedBand, planes_kept: u8, enc: &mut Encoder) -> u64 {
    let n_planes = q.n_planes();
    let planes_kept = planes_kept.min(n_planes);
    let (w, h) = (q.geometry.width, q.geometry.height);
    let mut models = [BinaryModel::new(); CONTEXTS_PER_BAND];
    let mut sig = vec![false; w * h];
    let mut coded = 0u64;
    for p in (n_planes - planes_kept..n_planes).rev() {
        for y in 0..h {
            for x in 0..w {
                let i = y * w + x;
                let bit = (q.magnitudes[i] >> p) & 1 == 1;
                if sig[i] {
                    enc.encode_bit(bit, &mut models[REFINE_CTX]);
                    coded += 1;
                } else {
                    let ctx = significance_context(&sig, w, h, x, y);
                    enc.encode_bit(bit, &mut models[ctx]);
                    coded += 1;
                    if bit {
                        enc.encode_bit(q.signs[i], &mut models[SIGN_CTX]);
                        coded += 1;
                        sig[i] = true;
                    }
                }
            }
        }
    }
    coded
}

/// Result of coding one band with its own coder instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedBand {
    pub n_planes: u8,
    pub planes_kept: u8,
    pub bits: u64,
    pub digits: DigitStream,
}

pub fn encode_band(q: &QuantizedBand, max_planes_kept: u8) -> CodedBand {
    let n_planes = q.n_planes();
    let planes_kept = max_planes_kept.min(n_planes);
    let mut enc = Encoder::new();
    let bits = encode_band_into(q, planes_kept, &mut enc);
    CodedBand {
        n_planes,
        planes_kept,
        bits,
        digits: enc.finish(),
    }
}

/// Decoded magnitudes hold only the kept high planes, still shifted to their
/// original weight; the low `n_planes - planes_kept` bits are zero.
pub fn decode_band(
    digits: &[Digit48],
    geometry: BandGeometry,
    step: Step,
    n_planes: u8,
    planes_kept: u8,
) -> QuantizedBand {
    let planes_kept = planes_kept.min(n_planes);
    let (w, h) = (geometry.width, geometry.height);
    let mut magnitudes = vec![0u32; w * h];
    let mut signs = vec![false; w * h];
    let mut sig = vec![false; w * h];
    let mut models = [BinaryModel::new(); CONTEXTS_PER_BAND];
    if planes_kept > 0 {
        let mut dec = Decoder::new(digits);
        for p in (n_planes - planes_kept..n_planes).rev() {
            for y in 0..h {
                for x in 0..w {
                    let i = y * w + x;
                    if sig[i] {
                        if dec.decode_bit(&mut models[REFINE_CTX]) {
                            magnitudes[i] |= 1 << p;
                        }
                    } else {
                        let ctx = significance_context(&sig, w, h, x, y);
                        if dec.decode_bit(&mut models[ctx]) {
                            magnitudes[i] |= 1 << p;
                            signs[i] = dec.decode_bit(&mut models[SIGN_CTX]);
                            sig[i] = true;
                        }
                    }
                }
            }
        }
    }
    QuantizedBand {
        geometry,
        step,
        magnitudes,
        signs,
    }
}
