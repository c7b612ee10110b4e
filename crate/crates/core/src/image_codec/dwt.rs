//! Reversible integer 5/3 lifting wavelet with whole-sample symmetric
//! extension and dyadic (Mallat) decomposition.

use crate::error::{Error, Result};

use super::ImagePlane;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BandKind {
    LL,
    /// Horizontal high-pass, vertical low-pass.
    HL,
    /// Horizontal low-pass, vertical high-pass.
    LH,
    HH,
}

impl BandKind {
    pub fn name(self) -> &'static str {
        match self {
            BandKind::LL => "LL",
            BandKind::HL => "HL",
            BandKind::LH => "LH",
            BandKind::HH => "HH",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BandGeometry {
    pub kind: BandKind,
    /// 1 is the finest level.
    pub level: u8,
    pub width: usize,
    pub height: usize,
    /// Offset of the band inside the Mallat-layout coefficient buffer.
    pub x0: usize,
    pub y0: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subband {
    pub geometry: BandGeometry,
    pub coeffs: Vec<i32>,
}

/// Coefficients of a full decomposition, bands in coding order: the deepest
/// LL, then HL, LH, HH for each level from deepest to finest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubbandSet {
    pub width: usize,
    pub height: usize,
    pub levels: u8,
    pub bands: Vec<Subband>,
}

impl SubbandSet {
    pub fn coefficient_count(&self) -> usize {
        self.bands.iter().map(|b| b.coeffs.len()).sum()
    }
}

pub fn check_levels(width: usize, height: usize, levels: u8) -> Result<()> {
    if levels == 0 {
        return Err(Error::InvalidParams(
            "at least one decomposition level is required".into(),
        ));
    }
    if levels > 30 || width < (1usize << levels) || height < (1usize << levels) {
        return Err(Error::InvalidParams(format!(
            "{width}x{height} image is too small for {levels} decomposition levels"
        )));
    }
    Ok(())
}

/// Band layout for a `width` x `height` image, in coding order.
pub fn band_geometry(width: usize, height: usize, levels: u8) -> Result<Vec<BandGeometry>> {
    check_levels(width, height, levels)?;
    // dims[l] = size of the LL region after l levels
    let mut dims = vec![(width, height)];
    for _ in 0..levels {
        let (w, h) = *dims.last().unwrap();
        dims.push((w.div_ceil(2), h.div_ceil(2)));
    }
    let (lw, lh) = dims[levels as usize];
    let mut out = vec![BandGeometry {
        kind: BandKind::LL,
        level: levels,
        width: lw,
        height: lh,
        x0: 0,
        y0: 0,
    }];
    for level in (1..=levels).rev() {
        let (w, h) = dims[level as usize - 1];
        let (low_w, low_h) = dims[level as usize];
        let (high_w, high_h) = (w - low_w, h - low_h);
        out.push(BandGeometry {
            kind: BandKind::HL,
            level,
            width: high_w,
            height: low_h,
            x0: low_w,
            y0: 0,
        });
        out.push(BandGeometry {
            kind: BandKind::LH,
            level,
            width: low_w,
            height: high_h,
            x0: 0,
            y0: low_h,
        });
        out.push(BandGeometry {
            kind: BandKind::HH,
            level,
            width: high_w,
            height: high_h,
            x0: low_w,
            y0: low_h,
        });
    }
    Ok(out)
}

fn lift_forward(x: &mut [i32], tmp: &mut Vec<i32>) {
    let n = x.len();
    if n < 2 {
        return;
    }
    let ns = n.div_ceil(2);
    let nd = n / 2;
    tmp.clear();
    tmp.resize(n, 0);
    let (s, d) = tmp.split_at_mut(ns);
    for i in 0..nd {
        let right = if 2 * i + 2 < n {
            x[2 * i + 2]
        } else {
            x[2 * i]
        };
        d[i] = x[2 * i + 1] - ((x[2 * i] + right) >> 1);
    }
    for i in 0..ns {
        let dl = if i == 0 { d[0] } else { d[i - 1] };
        let dr = if i < nd { d[i] } else { d[nd - 1] };
        s[i] = x[2 * i] + ((dl + dr + 2) >> 2);
    }
    x.copy_from_slice(tmp);
}

fn lift_inverse(x: &mut [i32], tmp: &mut Vec<i32>) {
    let n = x.len();
    if n < 2 {
        return;
    }
    let ns = n.div_ceil(2);
    let nd = n / 2;
    tmp.clear();
    tmp.resize(n, 0);
    let (s, d) = x.split_at(ns);
    for i in 0..ns {
        let dl = if i == 0 { d[0] } else { d[i - 1] };
        let dr = if i < nd { d[i] } else { d[nd - 1] };
        tmp[2 * i] = s[i] - ((dl + dr + 2) >> 2);
    }
    for i in 0..nd {
        let right = if 2 * i + 2 < n {
            tmp[2 * i + 2]
        } else {
            tmp[2 * i]
        };
        tmp[2 * i + 1] = d[i] + ((tmp[2 * i] + right) >> 1);
    }
    x.copy_from_slice(tmp);
}

fn lift_rows(
    buf: &mut [i32],
    stride: usize,
    w: usize,
    h: usize,
    lift: fn(&mut [i32], &mut Vec<i32>),
) {
    let mut tmp = Vec::with_capacity(w);
    for y in 0..h {
        lift(&mut buf[y * stride..y * stride + w], &mut tmp);
    }
}

fn lift_cols(
    buf: &mut [i32],
    stride: usize,
    w: usize,
    h: usize,
    lift: fn(&mut [i32], &mut Vec<i32>),
) {
    let mut line = Vec::with_capacity(h);
    let mut tmp = Vec::with_capacity(h);
    for x in 0..w {
        line.clear();
        line.extend((0..h).map(|y| buf[y * stride + x]));
        lift(&mut line, &mut tmp);
        for (y, &v) in line.iter().enumerate() {
            buf[y * stride + x] = v;
        }
    }
}

fn transform_region(buf: &mut [i32], stride: usize, w: usize, h: usize, inverse: bool) {
    if inverse {
        lift_cols(buf, stride, w, h, lift_inverse);
        lift_rows(buf, stride, w, h, lift_inverse);
    } else {
        lift_rows(buf, stride, w, h, lift_forward);
        lift_cols(buf, stride, w, h, lift_forward);
    }
}

pub fn dwt_forward(img: &ImagePlane, levels: u8) -> Result<SubbandSet> {
    let geometry = band_geometry(img.width, img.height, levels)?;
    let stride = img.width;
    let mut buf: Vec<i32> = img.samples.iter().map(|&v| v as i32).collect();
    let (mut w, mut h) = (img.width, img.height);
    for _ in 0..levels {
        transform_region(&mut buf, stride, w, h, false);
        w = w.div_ceil(2);
        h = h.div_ceil(2);
    }
    let bands = geometry
        .into_iter()
        .map(|g| {
            let mut coeffs = Vec::with_capacity(g.width * g.height);
            for y in g.y0..g.y0 + g.height {
                coeffs.extend_from_slice(&buf[y * stride + g.x0..y * stride + g.x0 + g.width]);
            }
            Subband {
                geometry: g,
                coeffs,
            }
        })
        .collect();
    Ok(SubbandSet {
        width: img.width,
        height: img.height,
        levels,
        bands,
    })
}

/// Reassembles the coefficient grid and undoes the lifting steps. Returns the
/// unclamped samples.
pub fn dwt_inverse_raw(set: &SubbandSet) -> Result<Vec<i32>> {
    let expected = band_geometry(set.width, set.height, set.levels)?;
    if expected.len() != set.bands.len() {
        return Err(Error::InvalidParams(format!(
            "expected {} bands, found {}",
            expected.len(),
            set.bands.len()
        )));
    }
    let stride = set.width;
    let mut buf = vec![0i32; set.width * set.height];
    for (g, band) in expected.iter().zip(&set.bands) {
        if band.geometry != *g || band.coeffs.len() != g.width * g.height {
            return Err(Error::InvalidParams(format!(
                "band {}{} has geometry {:?}, expected {:?}",
                g.kind.name(),
                g.level,
                band.geometry,
                g
            )));
        }
        for (row, y) in (g.y0..g.y0 + g.height).enumerate() {
            buf[y * stride + g.x0..y * stride + g.x0 + g.width]
                .copy_from_slice(&band.coeffs[row * g.width..(row + 1) * g.width]);
        }
    }
    let mut dims = vec![(set.width, set.height)];
    for _ in 0..set.levels {
        let (w, h) = *dims.last().unwrap();
        dims.push((w.div_ceil(2), h.div_ceil(2)));
    }
    for level in (0..set.levels as usize).rev() {
        let (w, h) = dims[level];
        transform_region(&mut buf, stride, w, h, true);
    }
    Ok(buf)
}

pub fn dwt_inverse(set: &SubbandSet) -> Result<ImagePlane> {
    let raw = dwt_inverse_raw(set)?;
    Ok(ImagePlane {
        width: set.width,
        height: set.height,
        samples: raw.into_iter().map(|v| v.clamp(0, 255) as u8).collect(),
    })
}
