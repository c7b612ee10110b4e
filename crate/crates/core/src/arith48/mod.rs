//! Adaptive binary arithmetic coder with base-48 output.
//!
//! Each input bit narrows the current interval in proportion to its
//! context's estimated probability. Output digits are produced by a
//! digit-aligned range coder, so the result maps one-to-one onto the
//! constrained codewords of [`crate::constrained_code`]. The decoder is told
//! how many bits to produce; there is no end-of-stream symbol.
//!
//! The streaming encoder terminates at the point of the final interval with
//! the shortest base-48 development, which makes its output identical to the
//! exact-rational [`oracle_encode`].

mod decoder;
mod encoder;
mod model;
mod oracle;

pub use decoder::Decoder;
pub use encoder::{CoderState, Encoder, TraceLine};
pub use model::{BinaryModel, RESCALE_LIMIT};
pub use oracle::{
    density_check, digits_value, encoder_interval, oracle_encode, oracle_interval,
    shortest_development, Rational,
};

use crate::constrained_code::{Digit48, DigitStream};
use crate::error::{Error, Result};

/// Register capacity in base-48 digits.
pub const REGISTER_DIGITS: u32 = 10;
/// 48^10, the width of the initial interval `[0, 1)` in register units.
pub const TOP: u64 = 48u64.pow(REGISTER_DIGITS);
/// Renormalization threshold, 48^9.
pub const BOTTOM: u64 = TOP / 48;

// low may reach 2 * TOP before a carry is settled, and is scaled by 48
const _: () = assert!(2 * TOP < u64::MAX / 48);

fn check_contexts(n_bits: usize, contexts: &[usize], n_models: usize) -> Result<()> {
    if contexts.len() != n_bits {
        return Err(Error::ContractViolation(format!(
            "{} bits but {} contexts",
            n_bits,
            contexts.len()
        )));
    }
    if let Some(&bad) = contexts.iter().find(|&&c| c >= n_models) {
        return Err(Error::ContractViolation(format!(
            "context {bad} not in model table of size {n_models}"
        )));
    }
    Ok(())
}

/// Encodes `bits`, bit `i` under model `contexts[i]`. Models are updated in
/// place.
pub fn encode(
    bits: &[bool],
    contexts: &[usize],
    models: &mut [BinaryModel],
) -> Result<DigitStream> {
    check_contexts(bits.len(), contexts, models.len())?;
    let mut enc = Encoder::new();
    for (&bit, &ctx) in bits.iter().zip(contexts) {
        enc.encode_bit(bit, &mut models[ctx]);
    }
    Ok(enc.finish())
}

/// Like [`encode`], also returning one trace line per coded bit.
pub fn encode_traced(
    bits: &[bool],
    contexts: &[usize],
    models: &mut [BinaryModel],
) -> Result<(DigitStream, Vec<TraceLine>)> {
    check_contexts(bits.len(), contexts, models.len())?;
    let mut enc = Encoder::new();
    let mut trace = Vec::with_capacity(bits.len());
    for (&bit, &ctx) in bits.iter().zip(contexts) {
        let mark = enc.emitted().len();
        enc.encode_bit(bit, &mut models[ctx]);
        trace.push(TraceLine {
            context: ctx,
            bit,
            split: enc.last_split(),
            emitted: enc.emitted()[mark..].to_vec(),
        });
    }
    Ok((enc.finish(), trace))
}

pub fn decode(
    digits: &[Digit48],
    n_bits: usize,
    contexts: &[usize],
    models: &mut [BinaryModel],
) -> Result<Vec<bool>> {
    check_contexts(n_bits, contexts, models.len())?;
    let mut dec = Decoder::new(digits);
    Ok(contexts
        .iter()
        .map(|&ctx| dec.decode_bit(&mut models[ctx]))
        .collect())
}
