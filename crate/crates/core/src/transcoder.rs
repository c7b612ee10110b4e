//! Fixed-rate byte transcoding: every byte becomes two base-48 digits, i.e.
//! two constrained codewords (6 nt).

use crate::constrained_code::{Digit48, DigitStream};
use crate::error::{Error, Result};

pub fn bytes_to_digits(bytes: &[u8]) -> DigitStream {
    let mut out = Vec::with_capacity(bytes.len() * 2);
    for &b in bytes {
        out.push(Digit48::new_unchecked(b / 48));
        out.push(Digit48::new_unchecked(b % 48));
    }
    out
}

pub fn digits_to_bytes(digits: &[Digit48]) -> Result<Vec<u8>> {
    if !digits.len().is_multiple_of(2) {
        return Err(Error::MalformedOverhead(format!(
            "odd digit count {}",
            digits.len()
        )));
    }
    digits
        .chunks_exact(2)
        .map(|pair| {
            let v = pair[0].value() as u16 * 48 + pair[1].value() as u16;
            u8::try_from(v)
                .map_err(|_| Error::MalformedOverhead(format!("digit pair value {v} exceeds 255")))
        })
        .collect()
}
