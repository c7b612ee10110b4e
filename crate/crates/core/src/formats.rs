//! Container layout: a byte header transcoded at 2 digits per byte, followed
//! by the arithmetic-coded payload digits.
//!
//! Header bytes, all integers big-endian:
//!
//! | offset | size | field                                            |
//! |--------|------|--------------------------------------------------|
//! | 0      | 4    | magic `HLX1`                                     |
//! | 4      | 1    | mode: 0 raw file, 1 image                        |
//! | 5      | 8    | payload bit count                                |
//! | 13     | 8    | payload digit count                              |
//! | 21     | 4    | CRC-32 (IEEE, reflected) of the payload digits, one byte per digit |
//!
//! Image mode appends: width (4), height (4), levels (1), step numerator (4),
//! step denominator (4), then per band in coding order `planes_kept` (1 byte
//! each), `n_planes` (1 byte each) and the band's digit count (4 bytes each).
//! There are `3 * levels + 1` bands.

use crate::constrained_code::{Digit48, DigitStream};
use crate::error::{Error, Result};
use crate::image_codec::{BandInfo, ImageInfo, Step};
use crate::transcoder::{bytes_to_digits, digits_to_bytes};

pub const MAGIC: [u8; 4] = *b"HLX1";
/// Length of the mode-independent header prefix in bytes.
pub const FIXED_HEADER_BYTES: usize = 25;
const IMAGE_PREFIX_BYTES: usize = 17;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ContainerMode {
    RawFile,
    Image(ImageInfo),
}

impl ContainerMode {
    pub fn tag(&self) -> u8 {
        match self {
            ContainerMode::RawFile => 0,
            ContainerMode::Image(_) => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContainerHeader {
    pub mode: ContainerMode,
    pub payload_bit_count: u64,
    pub payload_digit_count: u64,
    pub checksum: u32,
}

pub fn payload_checksum(payload: &[Digit48]) -> u32 {
    let mut h = crc32fast::Hasher::new();
    for d in payload {
        h.update(&[d.value()]);
    }
    h.finalize()
}

impl ContainerHeader {
    /// Header describing `payload`, with count and checksum filled in.
    pub fn for_payload(mode: ContainerMode, payload_bit_count: u64, payload: &[Digit48]) -> Self {
        ContainerHeader {
            mode,
            payload_bit_count,
            payload_digit_count: payload.len() as u64,
            checksum: payload_checksum(payload),
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(FIXED_HEADER_BYTES);
        out.extend_from_slice(&MAGIC);
        out.push(self.mode.tag());
        out.extend_from_slice(&self.payload_bit_count.to_be_bytes());
        out.extend_from_slice(&self.payload_digit_count.to_be_bytes());
        out.extend_from_slice(&self.checksum.to_be_bytes());
        if let ContainerMode::Image(info) = &self.mode {
            out.extend_from_slice(&info.width.to_be_bytes());
            out.extend_from_slice(&info.height.to_be_bytes());
            out.push(info.levels);
            out.extend_from_slice(&info.step.num().to_be_bytes());
            out.extend_from_slice(&info.step.den().to_be_bytes());
            out.extend(info.bands.iter().map(|b| b.planes_kept));
            out.extend(info.bands.iter().map(|b| b.n_planes));
            for b in &info.bands {
                out.extend_from_slice(&b.digit_count.to_be_bytes());
            }
        }
        out
    }

    /// Header length in digits.
    pub fn digit_len(&self) -> usize {
        2 * self.to_bytes().len()
    }
}

pub fn build_container(header: &ContainerHeader, payload: &[Digit48]) -> DigitStream {
    let mut out = bytes_to_digits(&header.to_bytes());
    out.extend_from_slice(payload);
    out
}

/// Reads header bytes out of a digit stream, tracking the position.
struct ByteCursor<'a> {
    digits: &'a [Digit48],
    pos: usize,
}

impl ByteCursor<'_> {
    fn take(&mut self, n: usize) -> Result<Vec<u8>> {
        let end = self.pos + 2 * n;
        if end > self.digits.len() {
            return Err(Error::TruncatedContainer {
                needed: end,
                available: self.digits.len(),
            });
        }
        let bytes = digits_to_bytes(&self.digits[self.pos..end])?;
        self.pos = end;
        Ok(bytes)
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N]> {
        Ok(self.take(N)?.try_into().expect("take returns N bytes"))
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.array::<1>()?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_be_bytes(self.array()?))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_be_bytes(self.array()?))
    }
}

/// Parses the header only and returns it with the header's digit length.
pub fn parse_header(digits: &[Digit48]) -> Result<(ContainerHeader, usize)> {
    let mut cur = ByteCursor { digits, pos: 0 };
    let magic: [u8; 4] = cur.array()?;
    if magic != MAGIC {
        return Err(Error::BadMagic(magic));
    }
    let tag = cur.u8()?;
    let payload_bit_count = cur.u64()?;
    let payload_digit_count = cur.u64()?;
    let checksum = cur.u32()?;
    let mode = match tag {
        0 => ContainerMode::RawFile,
        1 => {
            let width = cur.u32()?;
            let height = cur.u32()?;
            let levels = cur.u8()?;
            let num = cur.u32()?;
            let den = cur.u32()?;
            let step = Step::new(num, den).map_err(|_| {
                Error::MalformedOverhead(format!("quantizer step {num}/{den} is not positive"))
            })?;
            let n = ImageInfo::band_count(levels);
            let kept = cur.take(n)?;
            let planes = cur.take(n)?;
            let mut bands = Vec::with_capacity(n);
            for i in 0..n {
                bands.push(BandInfo {
                    planes_kept: kept[i],
                    n_planes: planes[i],
                    digit_count: cur.u32()?,
                });
            }
            debug_assert_eq!(
                cur.pos,
                2 * (FIXED_HEADER_BYTES + IMAGE_PREFIX_BYTES + 6 * n)
            );
            ContainerMode::Image(ImageInfo {
                width,
                height,
                levels,
                step,
                bands,
            })
        }
        other => {
            return Err(Error::MalformedOverhead(format!(
                "unknown container mode {other}"
            )))
        }
    };
    let header = ContainerHeader {
        mode,
        payload_bit_count,
        payload_digit_count,
        checksum,
    };
    Ok((header, cur.pos))
}

/// Inverse of [`build_container`]. Digits after the payload (oligo fill) are
/// ignored.
pub fn parse_container(digits: &[Digit48]) -> Result<(ContainerHeader, DigitStream)> {
    let (header, start) = parse_header(digits)?;
    let count = usize::try_from(header.payload_digit_count)
        .map_err(|_| Error::MalformedOverhead("payload digit count overflows".into()))?;
    let end = start
        .checked_add(count)
        .ok_or_else(|| Error::MalformedOverhead("payload digit count overflows".into()))?;
    if end > digits.len() {
        return Err(Error::TruncatedContainer {
            needed: end,
            available: digits.len(),
        });
    }
    let payload = digits[start..end].to_vec();
    let computed = payload_checksum(&payload);
    if computed != header.checksum {
        return Err(Error::CorruptPayload {
            stored: header.checksum,
            computed,
        });
    }
    Ok((header, payload))
}
