use std::fmt;

use super::model::BinaryModel;
use super::{BOTTOM, REGISTER_DIGITS, TOP};
use crate::constrained_code::{Digit48, DigitStream};

/// Interval registers of the streaming coder.
///
/// The coded interval is `[(P + low) / 48^(L+k), (P + low + range) / 48^(L+k))`
/// where `P` is the value of the `k` digits already shifted out (emitted,
/// cached and pending) scaled by `48^L`. `low >= 48^L` means a carry that has
/// not yet reached the cached digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoderState {
    pub low: u64,
    pub range: u64,
    pub pending: u64,
}

/// One coded bit, for differential testing against other implementations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceLine {
    pub context: usize,
    pub bit: bool,
    pub split: u64,
    pub emitted: Vec<Digit48>,
}

impl fmt::Display for TraceLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ctx={} bit={} split={} emit=",
            self.context, self.bit as u8, self.split
        )?;
        for (i, d) in self.emitted.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", d.value())?;
        }
        Ok(())
    }
}

/// Base-48 range encoder with cache/pending carry propagation.
#[derive(Debug, Clone)]
pub struct Encoder {
    low: u64,
    range: u64,
    cache: Option<u8>,
    pending: u64,
    out: Vec<Digit48>,
    last_split: u64,
}

impl Default for Encoder {
    fn default() -> Self {
        Self::new()
    }
}

impl Encoder {
    pub fn new() -> Self {
        Self {
            low: 0,
            range: TOP,
            cache: None,
            pending: 0,
            out: Vec::new(),
            last_split: 0,
        }
    }

    pub fn state(&self) -> CoderState {
        CoderState {
            low: self.low,
            range: self.range,
            pending: self.pending,
        }
    }

    /// Digits whose value is final.
    pub fn emitted(&self) -> &[Digit48] {
        &self.out
    }

    /// Shifted-out digits that a carry may still change: the cached digit
    /// followed by `pending` 47s.
    pub fn unsettled(&self) -> Vec<u8> {
        let mut v = Vec::new();
        if let Some(c) = self.cache {
            v.push(c);
        }
        v.extend(std::iter::repeat_n(47u8, self.pending as usize));
        v
    }

    pub fn last_split(&self) -> u64 {
        self.last_split
    }

    pub fn encode_bit(&mut self, bit: bool, model: &mut BinaryModel) {
        let split = model.split(self.range);
        self.last_split = split;
        if bit {
            self.low += split;
            self.range -= split;
        } else {
            self.range = split;
        }
        model.update(bit);
        while self.range < BOTTOM {
            self.range *= 48;
            self.shift_low();
        }
    }

    fn shift_low(&mut self) {
        let carry = self.low >= TOP;
        let low = if carry { self.low - TOP } else { self.low };
        let top = (low / BOTTOM) as u8;
        if top < 47 || carry {
            match self.cache {
                Some(c) => {
                    let d = c + carry as u8;
                    debug_assert!(d < 48, "carry overflowed a settled digit");
                    self.out.push(Digit48::new_unchecked(d));
                }
                None => debug_assert!(!carry, "carry out of the unit interval"),
            }
            let fill = if carry { 0 } else { 47 };
            for _ in 0..self.pending {
                self.out.push(Digit48::new_unchecked(fill));
            }
            self.pending = 0;
            self.cache = Some(top);
        } else {
            self.pending += 1;
        }
        self.low = (low % BOTTOM) * 48;
    }

    /// Terminates the stream at the point of the final interval with the
    /// shortest base-48 development. Trailing zero digits are dropped since the
    /// decoder reads missing digits as zero.
    pub fn finish(mut self) -> DigitStream {
        let end = self.low + self.range;
        let mut unit = TOP;
        loop {
            let x = self.low.div_ceil(unit) * unit;
            if x < end {
                self.low = x;
                break;
            }
            unit /= 48;
        }
        for _ in 0..=REGISTER_DIGITS {
            self.shift_low();
        }
        while self.out.last() == Some(&Digit48::ZERO) {
            self.out.pop();
        }
        self.out
    }
}
