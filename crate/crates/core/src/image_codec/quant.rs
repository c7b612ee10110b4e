//! Deadzone scalar quantization with a rational step.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

use super::dwt::{BandGeometry, Subband};

/// Quantizer step `num / den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Step {
    num: u32,
    den: u32,
}

impl Step {
    pub fn new(num: u32, den: u32) -> Result<Step> {
        if num == 0 || den == 0 {
            return Err(Error::InvalidParams(format!(
                "quantizer step {num}/{den} must be positive"
            )));
        }
        Ok(Step { num, den })
    }

    pub fn integer(num: u32) -> Result<Step> {
        Step::new(num, 1)
    }

    pub fn num(self) -> u32 {
        self.num
    }

    pub fn den(self) -> u32 {
        self.den
    }

    /// Steps of at most 1 reconstruct without the midpoint offset so that
    /// coding with every plane kept is lossless.
    pub fn is_fine(self) -> bool {
        self.num <= self.den
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Step {
    type Err = Error;

    /// Accepts `n` or `n/d`.
    fn from_str(s: &str) -> Result<Step> {
        let bad = || Error::InvalidParams(format!("cannot parse quantizer step {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        Step::new(n.parse().map_err(|_| bad())?, d.parse().map_err(|_| bad())?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantizedBand {
    pub geometry: BandGeometry,
    pub step: Step,
    pub magnitudes: Vec<u32>,
    /// `true` for negative coefficients.
    pub signs: Vec<bool>,
}

impl QuantizedBand {
    /// Bit length of the largest magnitude.
    pub fn n_planes(&self) -> u8 {
        let max = self.magnitudes.iter().copied().max().unwrap_or(0);
        (32 - max.leading_zeros()) as u8
    }
}

#[inline]
pub fn quantize_coefficient(c: i32, step: Step) -> (u32, bool) {
    let mag = (c.unsigned_abs() as u64 * step.den as u64) / step.num as u64;
    (
        u32::try_from(mag).expect("quantized magnitude fits in 32 bits"),
        c < 0,
    )
}

pub fn quantize(band: &Subband, step: Step) -> QuantizedBand {
    let (magnitudes, signs) = band
        .coeffs
        .iter()
        .map(|&c| quantize_coefficient(c, step))
        .unzip();
    QuantizedBand {
        geometry: band.geometry,
        step,
        magnitudes,
        signs,
    }
}

/// Real-valued reconstruction of a coefficient whose magnitude is known only
/// down to bit `dropped` (`partial = magnitude >> dropped`).
pub fn dequantize_value(partial: u32, negative: bool, step: Step, dropped: u8) -> f64 {
    if partial == 0 {
        return 0.0;
    }
    let v = if dropped == 0 && step.is_fine() {
        partial as f64 * step.as_f64()
    } else {
        (partial as f64 + 0.5) * (1u64 << dropped) as f64 * step.as_f64()
    };
    if negative {
        -v
    } else {
        v
    }
}

/// Integer reconstruction used by the decoder. Midpoint values are rounded
/// to nearest with ties away from zero. The plain `magnitude * step` path
/// rounds up, which recovers the original integer whenever `step <= 1`.
pub fn dequantize_coefficient(partial: u32, negative: bool, step: Step, dropped: u8) -> i32 {
    if partial == 0 {
        return 0;
    }
    let (num, den) = (step.num as u128, step.den as u128);
    let mag = if dropped == 0 && step.is_fine() {
        (partial as u128 * num).div_ceil(den)
    } else {
        // (partial + 1/2) * 2^dropped * num / den
        let twice = ((2 * partial as u128 + 1) << dropped) * num;
        (twice + den) / (2 * den)
    };
    let mag = i32::try_from(mag).expect("reconstructed coefficient fits in 32 bits");
    if negative {
        -mag
    } else {
        mag
    }
}
