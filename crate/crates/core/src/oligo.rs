//! Fixed-length indexed oligos and their FASTA form.
//!
//! Layout of one oligo of length `n`:
//!
//! ```text
//! [ index: 4 digits, 12 nt ][ payload: (n - 12) / 3 codewords ][ pad: (n - 12) % 3 nt ]
//! ```
//!
//! The index is written in base 48, most significant digit first. Pad
//! nucleotides are each the first of A, T, C, G that differs from the
//! nucleotide before it. Unused payload slots of the last oligo hold digit 0.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::constrained_code::{
    digit_to_codeword, max_homopolymer_run, nucleotides_to_digits, Digit48, DigitStream, Nucleotide,
};
use crate::error::{Error, Result};

pub const DEFAULT_OLIGO_LEN: usize = 200;
pub const INDEX_DIGITS: usize = 4;
pub const INDEX_NT: usize = 3 * INDEX_DIGITS;
/// 48^4 distinct indices.
pub const MAX_OLIGOS: u64 = 48 * 48 * 48 * 48;
pub const MIN_OLIGO_LEN: usize = INDEX_NT + 3;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OligoRecord {
    pub index: u32,
    pub nucleotides: Vec<Nucleotide>,
}

impl OligoRecord {
    pub fn sequence(&self) -> String {
        self.nucleotides.iter().map(|n| n.to_char()).collect()
    }
}

/// Payload digits carried by one oligo.
pub fn payload_capacity(oligo_len: usize) -> usize {
    (oligo_len - INDEX_NT) / 3
}

fn check_len(oligo_len: usize) -> Result<()> {
    if oligo_len < MIN_OLIGO_LEN {
        return Err(Error::InvalidParams(format!(
            "oligo length {oligo_len} is below the minimum of {MIN_OLIGO_LEN}"
        )));
    }
    Ok(())
}

/// Oligos needed for `digit_count` digits; never less than one.
pub fn oligo_count(digit_count: usize, oligo_len: usize) -> usize {
    digit_count.div_ceil(payload_capacity(oligo_len)).max(1)
}

fn index_digits(index: u32) -> [Digit48; INDEX_DIGITS] {
    let mut out = [Digit48::ZERO; INDEX_DIGITS];
    let mut v = index;
    for slot in out.iter_mut().rev() {
        *slot = Digit48::new_unchecked((v % 48) as u8);
        v /= 48;
    }
    out
}

fn pad_nucleotide(prev: Option<Nucleotide>) -> Nucleotide {
    Nucleotide::ALL
        .into_iter()
        .find(|&n| Some(n) != prev)
        .expect("four nucleotides")
}

fn build_record(index: u32, chunk: &[Digit48], oligo_len: usize) -> OligoRecord {
    let capacity = payload_capacity(oligo_len);
    let mut nts = Vec::with_capacity(oligo_len);
    let fill = std::iter::repeat_n(&Digit48::ZERO, capacity - chunk.len());
    for d in index_digits(index).iter().chain(chunk).chain(fill) {
        nts.extend_from_slice(&digit_to_codeword(*d).symbols());
    }
    while nts.len() < oligo_len {
        nts.push(pad_nucleotide(nts.last().copied()));
    }
    OligoRecord {
        index,
        nucleotides: nts,
    }
}

pub fn packetize(digits: &[Digit48], oligo_len: usize) -> Result<Vec<OligoRecord>> {
    check_len(oligo_len)?;
    let capacity = payload_capacity(oligo_len);
    let needed = oligo_count(digits.len(), oligo_len) as u64;
    if needed > MAX_OLIGOS {
        return Err(Error::CapacityExceeded {
            needed,
            limit: MAX_OLIGOS,
        });
    }
    if digits.is_empty() {
        return Ok(vec![build_record(0, &[], oligo_len)]);
    }
    Ok(digits
        .chunks(capacity)
        .enumerate()
        .map(|(i, chunk)| build_record(i as u32, chunk, oligo_len))
        .collect())
}

/// Decodes one record into its payload slots, checking length, constraint,
/// embedded index and pad.
pub fn parse_record(record: &OligoRecord, oligo_len: usize) -> Result<DigitStream> {
    check_len(oligo_len)?;
    let invalid = |reason: String| Error::InvalidOligo {
        record: format!("oligo_{}", record.index),
        reason,
    };
    let nts = &record.nucleotides;
    if nts.len() != oligo_len {
        return Err(invalid(format!("length {} != {oligo_len}", nts.len())));
    }
    let run = max_homopolymer_run(nts);
    if run > 3 {
        return Err(invalid(format!("homopolymer run of {run}")));
    }
    let coded = INDEX_NT + 3 * payload_capacity(oligo_len);
    let digits = nucleotides_to_digits(&nts[..coded]).map_err(|e| invalid(e.to_string()))?;
    let index = digits[..INDEX_DIGITS]
        .iter()
        .fold(0u32, |acc, d| acc * 48 + d.value() as u32);
    if index != record.index {
        return Err(invalid(format!("embedded index {index} does not match")));
    }
    for i in coded..oligo_len {
        if nts[i] != pad_nucleotide(Some(nts[i - 1])) {
            return Err(invalid(format!(
                "unexpected pad nucleotide at position {i}"
            )));
        }
    }
    Ok(digits[INDEX_DIGITS..].to_vec())
}

/// Validated, deduplicated oligos keyed by index.
#[derive(Debug, Clone, Default)]
pub struct OligoPool {
    oligo_len: usize,
    slots: BTreeMap<u32, (Vec<Nucleotide>, DigitStream)>,
}

impl OligoPool {
    pub fn from_records(records: &[OligoRecord], oligo_len: usize) -> Result<OligoPool> {
        check_len(oligo_len)?;
        let mut slots: BTreeMap<u32, (Vec<Nucleotide>, DigitStream)> = BTreeMap::new();
        for r in records {
            if let Some((nts, _)) = slots.get(&r.index) {
                if *nts != r.nucleotides {
                    return Err(Error::InconsistentDuplicate(r.index));
                }
                continue;
            }
            let payload = parse_record(r, oligo_len)?;
            slots.insert(r.index, (r.nucleotides.clone(), payload));
        }
        Ok(OligoPool { oligo_len, slots })
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn oligo_len(&self) -> usize {
        self.oligo_len
    }

    /// Payload digits of the leading run of consecutive indices 0, 1, 2, ...
    pub fn contiguous_prefix(&self) -> DigitStream {
        let mut out = Vec::new();
        for (expect, (&idx, (_, payload))) in self.slots.iter().enumerate() {
            if idx as usize != expect {
                break;
            }
            out.extend_from_slice(payload);
        }
        out
    }

    /// The first `expected_digits` payload digits; every oligo that holds
    /// any of them must be present.
    pub fn take_digits(&self, expected_digits: usize) -> Result<DigitStream> {
        let n = oligo_count(expected_digits, self.oligo_len);
        let missing: Vec<u32> = (0..n as u32)
            .filter(|i| !self.slots.contains_key(i))
            .collect();
        if !missing.is_empty() {
            return Err(Error::MissingOligo(missing));
        }
        let mut out = Vec::with_capacity(n * payload_capacity(self.oligo_len));
        for i in 0..n as u32 {
            out.extend_from_slice(&self.slots[&i].1);
        }
        out.truncate(expected_digits);
        Ok(out)
    }
}

/// Sorts, validates and strips `records` back into the original stream.
pub fn reassemble(
    records: &[OligoRecord],
    expected_digits: usize,
    oligo_len: usize,
) -> Result<DigitStream> {
    OligoPool::from_records(records, oligo_len)?.take_digits(expected_digits)
}

/// One `>oligo_<index>` header and one sequence line per record, LF endings.
pub fn write_fasta(records: &[OligoRecord]) -> String {
    let mut out = String::new();
    for r in records {
        writeln!(out, ">oligo_{}", r.index).unwrap();
        out.push_str(&r.sequence());
        out.push('\n');
    }
    out
}

/// Parses FASTA text. Sequences may span several lines; blank lines and CR
/// line endings are tolerated.
pub fn parse_fasta(text: &str) -> Result<Vec<OligoRecord>> {
    let mut records: Vec<OligoRecord> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        let bad = |reason: String| Error::InvalidFasta {
            line: lineno + 1,
            reason,
        };
        if line.trim().is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('>') {
            let id = name.split_whitespace().next().unwrap_or("");
            let index = id
                .strip_prefix("oligo_")
                .and_then(|s| s.parse::<u32>().ok())
                .ok_or_else(|| bad(format!("header {id:?} is not oligo_<index>")))?;
            records.push(OligoRecord {
                index,
                nucleotides: Vec::new(),
            });
        } else {
            let rec = records
                .last_mut()
                .ok_or_else(|| bad("sequence before first header".into()))?;
            for c in line.trim().chars() {
                rec.nucleotides
                    .push(Nucleotide::from_char(c).map_err(|e| bad(e.to_string()))?);
            }
        }
    }
    if records.is_empty() {
        return Err(Error::InvalidFasta {
            line: 0,
            reason: "no records".into(),
        });
    }
    Ok(records)
}
