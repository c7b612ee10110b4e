use super::model::BinaryModel;
use super::{BOTTOM, REGISTER_DIGITS, TOP};
use crate::constrained_code::Digit48;

/// Streaming counterpart of [`super::Encoder`]. Digits past the end of the
/// input read as zero.
#[derive(Debug, Clone)]
pub struct Decoder<'a> {
    digits: &'a [Digit48],
    pos: usize,
    code: u64,
    range: u64,
}

impl<'a> Decoder<'a> {
    pub fn new(digits: &'a [Digit48]) -> Self {
        let mut dec = Self {
            digits,
            pos: 0,
            code: 0,
            range: TOP,
        };
        for _ in 0..REGISTER_DIGITS {
            dec.code = dec.code * 48 + dec.next_digit();
        }
        dec
    }

    #[inline]
    fn next_digit(&mut self) -> u64 {
        let d = self.digits.get(self.pos).map_or(0, |d| d.value() as u64);
        self.pos += 1;
        d
    }

    /// Number of digits pulled so far, including zero padding.
    pub fn digits_read(&self) -> usize {
        self.pos
    }

    pub fn decode_bit(&mut self, model: &mut BinaryModel) -> bool {
        let split = model.split(self.range);
        let bit = if self.code < split {
            self.range = split;
            false
        } else {
            self.code -= split;
            self.range -= split;
            true
        };
        model.update(bit);
        while self.range < BOTTOM {
            self.range *= 48;
            self.code = self.code * 48 + self.next_digit();
        }
        bit
    }
}
