//! Binary (P5) PGM with 8-bit samples.

use crate::error::{Error, Result};

use super::ImagePlane;

struct Header<'a> {
    data: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b == b'#' {
                while self.data.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.data.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::InvalidPgm(format!("missing or bad {what}")))
    }
}

pub fn parse_pgm(data: &[u8]) -> Result<ImagePlane> {
    if !data.starts_with(b"P5") {
        return Err(Error::InvalidPgm("not a binary PGM (P5) file".into()));
    }
    let mut hdr = Header { data, pos: 2 };
    let width = hdr.number("width")?;
    let height = hdr.number("height")?;
    let maxval = hdr.number("maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(Error::InvalidPgm(format!("unsupported maxval {maxval}")));
    }
    if width == 0 || height == 0 {
        return Err(Error::InvalidPgm(format!("empty image {width}x{height}")));
    }
    // exactly one whitespace byte separates the header from the raster
    if !data.get(hdr.pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(Error::InvalidPgm("missing whitespace after maxval".into()));
    }
    let start = hdr.pos + 1;
    let len = width
        .checked_mul(height)
        .ok_or_else(|| Error::InvalidPgm("image dimensions overflow".into()))?;
    let raster = data
        .get(start..start + len)
        .ok_or_else(|| Error::InvalidPgm(format!("raster holds fewer than {len} samples")))?;
    ImagePlane::new(width, height, raster.to_vec())
}

pub fn write_pgm(img: &ImagePlane) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.samples);
    out
}
