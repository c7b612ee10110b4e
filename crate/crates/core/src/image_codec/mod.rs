//! Wavelet image codec: 5/3 lifting DWT, deadzone quantization, bit-plane
//! coding through [`crate::arith48`] and rate control by dropping the least
//! significant planes.

pub mod bitplane;
pub mod dwt;
pub mod pgm;
pub mod quant;

use rayon::prelude::*;

use crate::constrained_code::DigitStream;
use crate::error::{Error, Result};

pub use bitplane::{bit_planes, compose_planes, decode_band, encode_band, BitPlaneSet, CodedBand};
pub use dwt::{
    band_geometry, dwt_forward, dwt_inverse, BandGeometry, BandKind, Subband, SubbandSet,
};
pub use quant::{dequantize_coefficient, dequantize_value, quantize, QuantizedBand, Step};

/// 8-bit grayscale image, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImagePlane {
    pub width: usize,
    pub height: usize,
    pub samples: Vec<u8>,
}

impl ImagePlane {
    pub fn new(width: usize, height: usize, samples: Vec<u8>) -> Result<ImagePlane> {
        if width == 0 || height == 0 || samples.len() != width * height {
            return Err(Error::InvalidParams(format!(
                "{} samples do not form a {width}x{height} image",
                samples.len()
            )));
        }
        Ok(ImagePlane {
            width,
            height,
            samples,
        })
    }

    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }
}

/// How many of the most significant bit planes to code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PlanesKept {
    #[default]
    All,
    /// Keep the planes whose weight is within the top `n` planes of the
    /// whole image; the same bit weight is cut in every band.
    Top(u8),
}

impl std::fmt::Display for PlanesKept {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PlanesKept::All => f.write_str("all"),
            PlanesKept::Top(n) => write!(f, "{n}"),
        }
    }
}

impl std::str::FromStr for PlanesKept {
    type Err = Error;

    fn from_str(s: &str) -> Result<PlanesKept> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(PlanesKept::All);
        }
        s.parse().map(PlanesKept::Top).map_err(|_| {
            Error::InvalidParams(format!(
                "planes kept must be an integer or \"all\", got {s:?}"
            ))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ImageParams {
    pub step: Step,
    pub levels: u8,
    pub planes_kept: PlanesKept,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BandInfo {
    pub n_planes: u8,
    pub planes_kept: u8,
    pub digit_count: u32,
}

/// Everything the decoder needs besides the payload digits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ImageInfo {
    pub width: u32,
    pub height: u32,
    pub levels: u8,
    pub step: Step,
    pub bands: Vec<BandInfo>,
}

impl ImageInfo {
    pub fn band_count(levels: u8) -> usize {
        3 * levels as usize + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedImage {
    pub info: ImageInfo,
    /// Band streams concatenated in coding order.
    pub payload: DigitStream,
    pub bit_count: u64,
}

fn kept_per_band(n_planes: &[u8], planes_kept: PlanesKept) -> Vec<u8> {
    match planes_kept {
        PlanesKept::All => n_planes.to_vec(),
        PlanesKept::Top(k) => {
            let global = n_planes.iter().copied().max().unwrap_or(0);
            let cut = global.saturating_sub(k);
            n_planes.iter().map(|&n| n.saturating_sub(cut)).collect()
        }
    }
}

pub fn encode_image(img: &ImagePlane, params: &ImageParams) -> Result<EncodedImage> {
    let bands = dwt_forward(img, params.levels)?;
    let quantized: Vec<QuantizedBand> = bands
        .bands
        .iter()
        .map(|b| quantize(b, params.step))
        .collect();
    let n_planes: Vec<u8> = quantized.iter().map(|q| q.n_planes()).collect();
    let kept = kept_per_band(&n_planes, params.planes_kept);
    let coded: Vec<CodedBand> = quantized
        .par_iter()
        .zip(kept.par_iter())
        .map(|(q, &k)| encode_band(q, k))
        .collect();
    let mut payload = Vec::with_capacity(coded.iter().map(|c| c.digits.len()).sum());
    let mut infos = Vec::with_capacity(coded.len());
    let mut bit_count = 0;
    for c in coded {
        let digit_count = u32::try_from(c.digits.len())
            .map_err(|_| Error::InvalidParams("band stream exceeds 2^32 digits".into()))?;
        infos.push(BandInfo {
            n_planes: c.n_planes,
            planes_kept: c.planes_kept,
            digit_count,
        });
        bit_count += c.bits;
        payload.extend_from_slice(&c.digits);
    }
    let info = ImageInfo {
        width: u32::try_from(img.width)
            .map_err(|_| Error::InvalidParams("image too wide".into()))?,
        height: u32::try_from(img.height)
            .map_err(|_| Error::InvalidParams("image too tall".into()))?,
        levels: params.levels,
        step: params.step,
        bands: infos,
    };
    Ok(EncodedImage {
        info,
        payload,
        bit_count,
    })
}

pub fn decode_image(info: &ImageInfo, payload: &[crate::Digit48]) -> Result<ImagePlane> {
    let (w, h) = (info.width as usize, info.height as usize);
    let geometry = band_geometry(w, h, info.levels)?;
    if geometry.len() != info.bands.len() {
        return Err(Error::InvalidParams(format!(
            "{} band records for {} bands",
            info.bands.len(),
            geometry.len()
        )));
    }
    let mut slices = Vec::with_capacity(geometry.len());
    let mut offset = 0usize;
    for b in &info.bands {
        if b.planes_kept > b.n_planes || b.n_planes > 32 {
            return Err(Error::InvalidParams(format!(
                "band keeps {} of {} planes",
                b.planes_kept, b.n_planes
            )));
        }
        let end = offset + b.digit_count as usize;
        if end > payload.len() {
            return Err(Error::TruncatedContainer {
                needed: end,
                available: payload.len(),
            });
        }
        slices.push(&payload[offset..end]);
        offset = end;
    }
    let subbands: Vec<Subband> = geometry
        .par_iter()
        .zip(info.bands.par_iter())
        .zip(slices.par_iter())
        .map(|((&g, b), digits)| {
            let q = decode_band(digits, g, info.step, b.n_planes, b.planes_kept);
            let dropped = b.n_planes - b.planes_kept;
            let coeffs = q
                .magnitudes
                .iter()
                .zip(&q.signs)
                .map(|(&m, &neg)| dequantize_coefficient(m >> dropped, neg, info.step, dropped))
                .collect();
            Subband {
                geometry: g,
                coeffs,
            }
        })
        .collect();
    dwt_inverse(&SubbandSet {
        width: w,
        height: h,
        levels: info.levels,
        bands: subbands,
    })
}

/// Peak signal-to-noise ratio in dB for 8-bit samples; `f64::INFINITY` when
/// the images are identical.
pub fn psnr(a: &ImagePlane, b: &ImagePlane) -> Result<f64> {
    if a.width != b.width || a.height != b.height {
        return Err(Error::InvalidParams(format!(
            "cannot compare {}x{} with {}x{}",
            a.width, a.height, b.width, b.height
        )));
    }
    let sse: u64 = a
        .samples
        .iter()
        .zip(&b.samples)
        .map(|(&x, &y)| {
            let d = x as i64 - y as i64;
            (d * d) as u64
        })
        .sum();
    if sse == 0 {
        return Ok(f64::INFINITY);
    }
    let mse = sse as f64 / a.samples.len() as f64;
    Ok(10.0 * (255.0f64 * 255.0 / mse).log10())
}
