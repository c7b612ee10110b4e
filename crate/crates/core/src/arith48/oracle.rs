//! Exact-rational reference coder.
//!
//! Replays the integer split rule of the streaming coder but keeps the lower
//! bound of the interval as an exact fraction, then writes the number with
//! the shortest base-48 development inside the final interval. Intended for
//! short messages; cost grows with the square of the message length.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::encoder::Encoder;
use super::model::BinaryModel;
use super::{check_contexts, BOTTOM, REGISTER_DIGITS, TOP};
use crate::constrained_code::{Digit48, DigitStream};
use crate::error::Result;

pub type Rational = BigRational;

fn pow48(n: u32) -> BigInt {
    num_traits::pow(BigInt::from(48u32), n as usize)
}

/// The exact final interval `[lo, hi)` for `bits`.
pub fn oracle_interval(
    bits: &[bool],
    contexts: &[usize],
    models: &mut [BinaryModel],
) -> Result<(Rational, Rational)> {
    check_contexts(bits.len(), contexts, models.len())?;
    // lo = lo_num / scale
    let mut lo_num = BigInt::zero();
    let mut scale = pow48(REGISTER_DIGITS);
    let mut range = TOP;
    for (&bit, &ctx) in bits.iter().zip(contexts) {
        let model = &mut models[ctx];
        let split = model.split(range);
        if bit {
            lo_num += split;
            range -= split;
        } else {
            range = split;
        }
        model.update(bit);
        while range < BOTTOM {
            range *= 48;
            scale *= 48;
            lo_num *= 48;
        }
    }
    let hi_num = &lo_num + range;
    Ok((
        Rational::new(lo_num, scale.clone()),
        Rational::new(hi_num, scale),
    ))
}

/// Smallest `n`, then smallest `a`, with `lo <= a / 48^n < hi`; returns `a`
/// as exactly `n` base-48 digits.
pub fn shortest_development(lo: &Rational, hi: &Rational) -> DigitStream {
    assert!(lo < hi, "empty interval");
    let mut n = 0u32;
    let mut p = BigInt::one();
    loop {
        let scaled_lo = lo * Rational::from_integer(p.clone());
        let a = scaled_lo.ceil().to_integer();
        if Rational::new(a.clone(), p.clone()) < *hi {
            return to_digits(a, n);
        }
        n += 1;
        p *= 48;
    }
}

fn to_digits(mut a: BigInt, n: u32) -> DigitStream {
    let radix = BigInt::from(48u32);
    let mut out = vec![Digit48::ZERO; n as usize];
    for slot in out.iter_mut().rev() {
        let (q, r) = a.div_mod_floor(&radix);
        *slot = Digit48::new_unchecked(r.to_u8().expect("remainder below 48"));
        a = q;
    }
    debug_assert!(a.is_zero());
    out
}

pub fn oracle_encode(
    bits: &[bool],
    contexts: &[usize],
    models: &mut [BinaryModel],
) -> Result<DigitStream> {
    let (lo, hi) = oracle_interval(bits, contexts, models)?;
    Ok(shortest_development(&lo, &hi))
}

/// `floor(48^n x) / 48^n`, the base-48 truncation of `x` to `n` digits.
pub fn density_check(x: &Rational, n: u32) -> Rational {
    let p = pow48(n);
    let scaled = x * Rational::from_integer(p.clone());
    Rational::new(scaled.floor().to_integer(), p)
}

/// Value of a digit string read as a base-48 fraction.
pub fn digits_value(digits: &[Digit48]) -> Rational {
    let mut num = BigInt::zero();
    for d in digits {
        num = num * 48 + d.value();
    }
    Rational::new(num, pow48(digits.len() as u32))
}

/// The exact interval currently held by a streaming encoder.
pub fn encoder_interval(enc: &Encoder) -> (Rational, Rational) {
    let mut prefix = BigInt::zero();
    let mut k = 0u32;
    for d in enc.emitted() {
        prefix = prefix * 48 + d.value();
        k += 1;
    }
    for d in enc.unsettled() {
        prefix = prefix * 48 + d;
        k += 1;
    }
    let state = enc.state();
    let base = prefix * pow48(REGISTER_DIGITS) + state.low;
    let scale = pow48(REGISTER_DIGITS + k);
    let hi = &base + state.range;
    (Rational::new(base, scale.clone()), Rational::new(hi, scale))
}
