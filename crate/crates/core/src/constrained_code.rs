//! The homopolymer-constrained quaternary alphabet.
//!
//! Every output symbol of this crate is a 3-nucleotide codeword `xyz` with
//! `z != y`. There are exactly 4 * 4 * 3 = 48 of them, so one codeword carries
//! one base-48 digit. Since the last two nucleotides of a codeword differ, a
//! run of identical nucleotides can cover at most the final nucleotide of one
//! codeword plus the first two of the next: any concatenation of codewords has
//! homopolymer runs of length 3 or less.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Nucleotide {
    A = 0,
    T = 1,
    C = 2,
    G = 3,
}

impl Nucleotide {
    /// All four nucleotides in dictionary order (A < T < C < G).
    pub const ALL: [Nucleotide; 4] = [Nucleotide::A, Nucleotide::T, Nucleotide::C, Nucleotide::G];

    #[inline]
    pub fn rank(self) -> u8 {
        self as u8
    }

    #[inline]
    pub fn from_rank(rank: u8) -> Nucleotide {
        Self::ALL[rank as usize & 3]
    }

    pub fn to_char(self) -> char {
        match self {
            Nucleotide::A => 'A',
            Nucleotide::T => 'T',
            Nucleotide::C => 'C',
            Nucleotide::G => 'G',
        }
    }

    pub fn from_char(c: char) -> Result<Nucleotide> {
        match c {
            'A' => Ok(Nucleotide::A),
            'T' => Ok(Nucleotide::T),
            'C' => Ok(Nucleotide::C),
            'G' => Ok(Nucleotide::G),
            other => Err(Error::InvalidNucleotide(other)),
        }
    }

    #[inline]
    pub fn is_gc(self) -> bool {
        matches!(self, Nucleotide::G | Nucleotide::C)
    }
}

impl fmt::Display for Nucleotide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// One base-48 digit, the arithmetic coder's output unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Digit48(u8);

impl Digit48 {
    pub const RADIX: u8 = 48;
    pub const MAX: Digit48 = Digit48(47);
    pub const ZERO: Digit48 = Digit48(0);

    pub fn new(value: u8) -> Result<Digit48> {
        if value < Self::RADIX {
            Ok(Digit48(value))
        } else {
            Err(Error::ContractViolation(format!(
                "digit {value} outside [0, 47]"
            )))
        }
    }

    /// Caller guarantees `value < 48`.
    #[inline]
    pub(crate) const fn new_unchecked(value: u8) -> Digit48 {
        debug_assert!(value < Self::RADIX);
        Digit48(value)
    }

    #[inline]
    pub fn value(self) -> u8 {
        self.0
    }
}

impl TryFrom<u8> for Digit48 {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        Digit48::new(value)
    }
}

impl From<Digit48> for u8 {
    fn from(d: Digit48) -> u8 {
        d.0
    }
}

/// A sequence of base-48 digits, most significant first.
pub type DigitStream = Vec<Digit48>;

/// Converts raw values into digits, rejecting anything above 47.
pub fn digits_from_values(values: &[u8]) -> Result<DigitStream> {
    values.iter().map(|&v| Digit48::new(v)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Codeword3([Nucleotide; 3]);

impl Codeword3 {
    pub fn new(symbols: [Nucleotide; 3]) -> Result<Codeword3> {
        if symbols[2] == symbols[1] {
            return Err(Error::InvalidCodeword(
                symbols.iter().map(|n| n.to_char()).collect(),
            ));
        }
        Ok(Codeword3(symbols))
    }

    pub fn symbols(&self) -> [Nucleotide; 3] {
        self.0
    }

    pub fn parse(text: &str) -> Result<Codeword3> {
        let chars: Vec<char> = text.chars().collect();
        if chars.len() != 3 {
            return Err(Error::InvalidCodeword(text.to_string()));
        }
        Codeword3::new([
            Nucleotide::from_char(chars[0])?,
            Nucleotide::from_char(chars[1])?,
            Nucleotide::from_char(chars[2])?,
        ])
    }
}

impl fmt::Display for Codeword3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in self.0 {
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

/// The 48 codewords indexed by digit value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dictionary48 {
    entries: [Codeword3; 48],
}

impl Dictionary48 {
    pub fn entries(&self) -> &[Codeword3; 48] {
        &self.entries
    }

    pub fn get(&self, d: Digit48) -> Codeword3 {
        self.entries[d.value() as usize]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

const fn build_entries() -> [Codeword3; 48] {
    let mut out = [Codeword3([Nucleotide::A; 3]); 48];
    let mut k = 0;
    while k < 48 {
        out[k] = Codeword3(codeword_symbols(k as u8));
        k += 1;
    }
    out
}

// x: k / 12, y: (k / 3) % 4, z: the (k % 3)-th nucleotide other than y.
const fn codeword_symbols(k: u8) -> [Nucleotide; 3] {
    let x = k / 12;
    let y = (k / 3) % 4;
    let skip = k % 3;
    let z = if skip >= y { skip + 1 } else { skip };
    [rank_const(x), rank_const(y), rank_const(z)]
}

const fn rank_const(r: u8) -> Nucleotide {
    match r {
        0 => Nucleotide::A,
        1 => Nucleotide::T,
        2 => Nucleotide::C,
        _ => Nucleotide::G,
    }
}

static DICTIONARY: Dictionary48 = Dictionary48 {
    entries: build_entries(),
};

/// The canonical dictionary: all `xyz` with `z != y`, in lexicographic order
/// under A < T < C < G.
pub fn enumerate_dictionary() -> &'static Dictionary48 {
    &DICTIONARY
}

#[inline]
pub fn digit_to_codeword(d: Digit48) -> Codeword3 {
    DICTIONARY.entries[d.value() as usize]
}

/// Inverse of [`digit_to_codeword`]. The `Codeword3` type already enforces
/// `z != y`; [`codeword_to_digit_raw`] accepts unchecked triplets.
#[inline]
pub fn codeword_to_digit(c: Codeword3) -> Digit48 {
    let [x, y, z] = c.0;
    let (y, z) = (y.rank(), z.rank());
    let z_pos = if z > y { z - 1 } else { z };
    Digit48::new_unchecked(x.rank() * 12 + y * 3 + z_pos)
}

pub fn codeword_to_digit_raw(symbols: [Nucleotide; 3]) -> Result<Digit48> {
    Codeword3::new(symbols).map(codeword_to_digit)
}

/// Expands digits into their codewords, 3 nt per digit.
pub fn digits_to_nucleotides(digits: &[Digit48]) -> Vec<Nucleotide> {
    let mut out = Vec::with_capacity(digits.len() * 3);
    for &d in digits {
        out.extend_from_slice(&digit_to_codeword(d).0);
    }
    out
}

/// Inverse of [`digits_to_nucleotides`]; the length must be a multiple of 3.
pub fn nucleotides_to_digits(nts: &[Nucleotide]) -> Result<DigitStream> {
    if !nts.len().is_multiple_of(3) {
        return Err(Error::ContractViolation(format!(
            "nucleotide count {} is not a multiple of 3",
            nts.len()
        )));
    }
    nts.chunks_exact(3)
        .map(|c| codeword_to_digit_raw([c[0], c[1], c[2]]))
        .collect()
}

pub fn parse_nucleotides(text: &str) -> Result<Vec<Nucleotide>> {
    text.chars().map(Nucleotide::from_char).collect()
}

pub fn nucleotides_to_string(nts: &[Nucleotide]) -> String {
    nts.iter().map(|n| n.to_char()).collect()
}

pub fn max_homopolymer_run(s: &[Nucleotide]) -> usize {
    let mut best = 0;
    let mut run = 0;
    let mut prev = None;
    for &n in s {
        if Some(n) == prev {
            run += 1;
        } else {
            run = 1;
            prev = Some(n);
        }
        best = best.max(run);
    }
    best
}

/// Fraction of G and C nucleotides. Reported only, never enforced.
pub fn gc_content(s: &[Nucleotide]) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    let gc = s.iter().filter(|n| n.is_gc()).count();
    Ok(gc as f64 / s.len() as f64)
}
