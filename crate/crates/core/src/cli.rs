//! Command implementations behind the `helix48` binary.
//!
//! Every command has an in-memory core (`*_bytes`, `*_records`) that the
//! file-level `cmd_*` wrappers call, so the pipelines can be exercised
//! without touching the filesystem.

use std::fmt;
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::arith48::{BinaryModel, Decoder, Encoder};
use crate::constrained_code::{gc_content, max_homopolymer_run, Digit48, DigitStream, Nucleotide};
use crate::error::{Error, Result};
use crate::formats::{
    build_container, parse_container, parse_header, ContainerHeader, ContainerMode,
};
use crate::image_codec::pgm::{parse_pgm, write_pgm};
use crate::image_codec::{
    decode_image, encode_image, psnr, ImageParams, ImagePlane, PlanesKept, Step,
};
use crate::oligo::{packetize, parse_fasta, write_fasta, OligoPool, OligoRecord};

/// Process exit status for an error: 1 usage, 2 data/format, 3 IO.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) => 3,
        Error::InvalidParams(_) | Error::ContractViolation(_) => 1,
        _ => 2,
    }
}

/// Sequence statistics of a set of oligos.
#[derive(Debug, Clone, PartialEq)]
pub struct PoolSummary {
    pub oligos: usize,
    pub nucleotides: usize,
    pub gc_content: f64,
    pub max_run: usize,
}

impl PoolSummary {
    pub fn of(records: &[OligoRecord]) -> Result<PoolSummary> {
        let all: Vec<Nucleotide> = records
            .iter()
            .flat_map(|r| r.nucleotides.iter().copied())
            .collect();
        Ok(PoolSummary {
            oligos: records.len(),
            nucleotides: all.len(),
            gc_content: gc_content(&all)?,
            max_run: records
                .iter()
                .map(|r| max_homopolymer_run(&r.nucleotides))
                .max()
                .unwrap_or(0),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FileEncodeReport {
    pub input_bytes: usize,
    pub header_digits: usize,
    pub payload_digits: usize,
    pub pool: PoolSummary,
}

impl FileEncodeReport {
    pub fn nt_per_byte(&self) -> f64 {
        if self.input_bytes == 0 {
            0.0
        } else {
            self.pool.nucleotides as f64 / self.input_bytes as f64
        }
    }
}

impl fmt::Display for FileEncodeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "input bytes:     {}", self.input_bytes)?;
        writeln!(f, "payload digits:  {}", self.payload_digits)?;
        writeln!(f, "header digits:   {}", self.header_digits)?;
        writeln!(f, "oligos:          {}", self.pool.oligos)?;
        writeln!(f, "nucleotides:     {}", self.pool.nucleotides)?;
        writeln!(f, "nt/byte:         {:.4}", self.nt_per_byte())?;
        writeln!(f, "GC content:      {:.4}", self.pool.gc_content)?;
        write!(f, "max homopolymer: {}", self.pool.max_run)
    }
}

fn records_for(
    header: &ContainerHeader,
    payload: &[Digit48],
    oligo_len: usize,
) -> Result<Vec<OligoRecord>> {
    packetize(&build_container(header, payload), oligo_len)
}

/// Codes every bit of `data`, most significant bit of each byte first, under
/// one adaptive context.
pub fn encode_raw_payload(data: &[u8]) -> DigitStream {
    let mut enc = Encoder::new();
    let mut model = BinaryModel::new();
    for &byte in data {
        for shift in (0..8).rev() {
            enc.encode_bit((byte >> shift) & 1 == 1, &mut model);
        }
    }
    enc.finish()
}

pub fn decode_raw_payload(payload: &[Digit48], n_bits: u64) -> Result<Vec<u8>> {
    if !n_bits.is_multiple_of(8) {
        return Err(Error::MalformedOverhead(format!(
            "raw payload bit count {n_bits} is not whole bytes"
        )));
    }
    let mut dec = Decoder::new(payload);
    let mut model = BinaryModel::new();
    let mut out = Vec::with_capacity((n_bits / 8) as usize);
    for _ in 0..n_bits / 8 {
        let mut byte = 0u8;
        for _ in 0..8 {
            byte = (byte << 1) | dec.decode_bit(&mut model) as u8;
        }
        out.push(byte);
    }
    Ok(out)
}

pub fn encode_file_bytes(
    data: &[u8],
    oligo_len: usize,
) -> Result<(Vec<OligoRecord>, FileEncodeReport)> {
    let payload = encode_raw_payload(data);
    let header =
        ContainerHeader::for_payload(ContainerMode::RawFile, 8 * data.len() as u64, &payload);
    let records = records_for(&header, &payload, oligo_len)?;
    let report = FileEncodeReport {
        input_bytes: data.len(),
        header_digits: header.digit_len(),
        payload_digits: payload.len(),
        pool: PoolSummary::of(&records)?,
    };
    Ok((records, report))
}

/// Oligo length shared by all records.
fn infer_oligo_len(records: &[OligoRecord]) -> Result<usize> {
    let first = records.first().ok_or(Error::EmptyInput)?;
    Ok(first.nucleotides.len())
}

/// Reassembles the container from oligos in any order and verifies it.
pub fn unpack_container(records: &[OligoRecord]) -> Result<(ContainerHeader, DigitStream)> {
    let oligo_len = infer_oligo_len(records)?;
    let pool = OligoPool::from_records(records, oligo_len)?;
    let prefix = pool.contiguous_prefix();
    let (header, header_digits) = match parse_header(&prefix) {
        Ok(h) => h,
        Err(Error::TruncatedContainer { .. }) => {
            let next = (prefix.len() / crate::oligo::payload_capacity(oligo_len)) as u32;
            return Err(Error::MissingOligo(vec![next]));
        }
        Err(e) => return Err(e),
    };
    let total = usize::try_from(header.payload_digit_count)
        .ok()
        .and_then(|n| n.checked_add(header_digits))
        .ok_or_else(|| Error::MalformedOverhead("payload digit count overflows".into()))?;
    let digits = pool.take_digits(total)?;
    parse_container(&digits)
}

pub fn decode_file_records(records: &[OligoRecord]) -> Result<Vec<u8>> {
    let (header, payload) = unpack_container(records)?;
    match header.mode {
        ContainerMode::RawFile => decode_raw_payload(&payload, header.payload_bit_count),
        ContainerMode::Image(_) => Err(Error::InvalidParams(
            "container holds an image; use decode-image".into(),
        )),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImageEncodeReport {
    pub width: usize,
    pub height: usize,
    pub coded_bits: u64,
    pub header_digits: usize,
    pub payload_digits: usize,
    pub pool: PoolSummary,
}

impl ImageEncodeReport {
    /// Nucleotides of the merged stream (header plus payload) per pixel.
    pub fn stream_nt_per_pixel(&self) -> f64 {
        3.0 * (self.header_digits + self.payload_digits) as f64 / (self.width * self.height) as f64
    }

    /// Nucleotides of the oligo pool per pixel.
    pub fn oligo_nt_per_pixel(&self) -> f64 {
        self.pool.nucleotides as f64 / (self.width * self.height) as f64
    }
}

impl fmt::Display for ImageEncodeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "image:           {}x{}", self.width, self.height)?;
        writeln!(f, "coded bits:      {}", self.coded_bits)?;
        writeln!(f, "payload digits:  {}", self.payload_digits)?;
        writeln!(f, "header digits:   {}", self.header_digits)?;
        writeln!(f, "oligos:          {}", self.pool.oligos)?;
        writeln!(f, "nucleotides:     {}", self.pool.nucleotides)?;
        writeln!(
            f,
            "rate (stream):   {:.6} nt/pixel",
            self.stream_nt_per_pixel()
        )?;
        writeln!(
            f,
            "rate (oligos):   {:.6} nt/pixel",
            self.oligo_nt_per_pixel()
        )?;
        writeln!(f, "GC content:      {:.4}", self.pool.gc_content)?;
        write!(f, "max homopolymer: {}", self.pool.max_run)
    }
}

pub fn encode_image_records(
    img: &ImagePlane,
    params: &ImageParams,
    oligo_len: usize,
) -> Result<(Vec<OligoRecord>, ImageEncodeReport)> {
    let encoded = encode_image(img, params)?;
    let header = ContainerHeader::for_payload(
        ContainerMode::Image(encoded.info.clone()),
        encoded.bit_count,
        &encoded.payload,
    );
    let records = records_for(&header, &encoded.payload, oligo_len)?;
    let report = ImageEncodeReport {
        width: img.width,
        height: img.height,
        coded_bits: encoded.bit_count,
        header_digits: header.digit_len(),
        payload_digits: encoded.payload.len(),
        pool: PoolSummary::of(&records)?,
    };
    Ok((records, report))
}

pub fn decode_image_records(records: &[OligoRecord]) -> Result<ImagePlane> {
    let (header, payload) = unpack_container(records)?;
    match header.mode {
        ContainerMode::Image(info) => decode_image(&info, &payload),
        ContainerMode::RawFile => Err(Error::InvalidParams(
            "container holds a raw file; use decode-file".into(),
        )),
    }
}

fn read_fasta_file(path: &Path) -> Result<Vec<OligoRecord>> {
    parse_fasta(&fs::read_to_string(path)?)
}

pub fn cmd_encode_file(input: &Path, output: &Path, oligo_len: usize) -> Result<FileEncodeReport> {
    let data = fs::read(input)?;
    let (records, report) = encode_file_bytes(&data, oligo_len)?;
    fs::write(output, write_fasta(&records))?;
    Ok(report)
}

pub fn cmd_decode_file(input: &Path, output: &Path) -> Result<usize> {
    let data = decode_file_records(&read_fasta_file(input)?)?;
    fs::write(output, &data)?;
    Ok(data.len())
}

pub fn cmd_encode_image(
    input: &Path,
    output: &Path,
    params: &ImageParams,
    oligo_len: usize,
) -> Result<ImageEncodeReport> {
    let img = parse_pgm(&fs::read(input)?)?;
    let (records, report) = encode_image_records(&img, params, oligo_len)?;
    fs::write(output, write_fasta(&records))?;
    Ok(report)
}

pub fn cmd_decode_image(input: &Path, output: &Path) -> Result<ImagePlane> {
    let img = decode_image_records(&read_fasta_file(input)?)?;
    fs::write(output, write_pgm(&img))?;
    Ok(img)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OligoStats {
    pub index: u32,
    pub length: usize,
    pub gc_content: f64,
    pub max_run: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatsReport {
    pub expected_len: usize,
    pub per_oligo: Vec<OligoStats>,
    pub pool: PoolSummary,
    /// `(mode, header digits, payload digits)` when the pool decodes.
    pub container: std::result::Result<(&'static str, usize, usize), String>,
}

impl StatsReport {
    pub fn length_violations(&self) -> usize {
        self.per_oligo
            .iter()
            .filter(|o| o.length != self.expected_len)
            .count()
    }

    pub fn run_violations(&self) -> usize {
        self.per_oligo.iter().filter(|o| o.max_run > 3).count()
    }

    pub fn is_clean(&self) -> bool {
        self.length_violations() == 0 && self.run_violations() == 0
    }

    /// Share of nucleotides that are not payload: oligo indices, pads, fill
    /// and the container header.
    pub fn overhead_fraction(&self) -> Option<f64> {
        let (_, _, payload) = self.container.as_ref().ok()?;
        Some(1.0 - (3 * payload) as f64 / self.pool.nucleotides as f64)
    }
}

impl fmt::Display for StatsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "index\tlength\tgc\tmax_run")?;
        for o in &self.per_oligo {
            writeln!(
                f,
                "{}\t{}\t{:.4}\t{}",
                o.index, o.length, o.gc_content, o.max_run
            )?;
        }
        writeln!(f, "oligos:            {}", self.pool.oligos)?;
        writeln!(f, "nucleotides:       {}", self.pool.nucleotides)?;
        writeln!(f, "GC content:        {:.4}", self.pool.gc_content)?;
        writeln!(f, "max homopolymer:   {}", self.pool.max_run)?;
        writeln!(
            f,
            "length violations: {} (expected {} nt)",
            self.length_violations(),
            self.expected_len
        )?;
        writeln!(f, "run violations:    {}", self.run_violations())?;
        match &self.container {
            Ok((mode, header, payload)) => {
                writeln!(
                    f,
                    "container:         {mode}, {header} header + {payload} payload digits"
                )?;
                write!(
                    f,
                    "overhead:          {:.4}",
                    self.overhead_fraction().unwrap_or(0.0)
                )
            }
            Err(e) => write!(f, "container:         not decodable ({e})"),
        }
    }
}

pub fn stats_records(records: &[OligoRecord], expected_len: usize) -> Result<StatsReport> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let per_oligo = records
        .iter()
        .map(|r| {
            Ok(OligoStats {
                index: r.index,
                length: r.nucleotides.len(),
                gc_content: gc_content(&r.nucleotides)?,
                max_run: max_homopolymer_run(&r.nucleotides),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let container = unpack_container(records)
        .map(|(h, p)| {
            let mode = match h.mode {
                ContainerMode::RawFile => "raw file",
                ContainerMode::Image(_) => "image",
            };
            (mode, h.digit_len(), p.len())
        })
        .map_err(|e| e.to_string());
    Ok(StatsReport {
        expected_len,
        per_oligo,
        pool: PoolSummary::of(records)?,
        container,
    })
}

pub fn cmd_stats(input: &Path, expected_len: usize) -> Result<StatsReport> {
    let text = fs::read_to_string(input)?;
    if text.trim().is_empty() {
        return Err(Error::EmptyInput);
    }
    stats_records(&parse_fasta(&text)?, expected_len)
}

/// One point of a rate-distortion sweep. The rate counts the nucleotides of
/// the merged quaternary stream (header and payload) per pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct RdPoint {
    pub step: Step,
    pub planes_kept: PlanesKept,
    pub stream_nt: u64,
    pub pixels: u64,
    pub psnr_db: f64,
}

impl RdPoint {
    pub fn rate_nt_per_pixel(&self) -> f64 {
        self.stream_nt as f64 / self.pixels as f64
    }
}

pub const RD_CSV_HEADER: &str = "step,planes_kept,rate_nt_per_pixel,psnr_db";

pub fn rd_point(
    img: &ImagePlane,
    levels: u8,
    step: Step,
    planes_kept: PlanesKept,
) -> Result<RdPoint> {
    let params = ImageParams {
        step,
        levels,
        planes_kept,
    };
    let encoded = encode_image(img, &params)?;
    let header = ContainerHeader::for_payload(
        ContainerMode::Image(encoded.info.clone()),
        encoded.bit_count,
        &encoded.payload,
    );
    let stream = build_container(&header, &encoded.payload);
    let (parsed, payload) = parse_container(&stream)?;
    let ContainerMode::Image(info) = parsed.mode else {
        unreachable!("image container parsed as raw");
    };
    let decoded = decode_image(&info, &payload)?;
    Ok(RdPoint {
        step,
        planes_kept,
        stream_nt: 3 * stream.len() as u64,
        pixels: img.pixel_count() as u64,
        psnr_db: psnr(img, &decoded)?,
    })
}

/// Runs every `(step, planes_kept)` pair and returns the points sorted by
/// rate.
pub fn rd_sweep(
    img: &ImagePlane,
    levels: u8,
    points: &[(Step, PlanesKept)],
) -> Result<Vec<RdPoint>> {
    let mut out = points
        .par_iter()
        .map(|&(step, kept)| rd_point(img, levels, step, kept))
        .collect::<Result<Vec<_>>>()?;
    let kept_rank = |k: PlanesKept| match k {
        PlanesKept::Top(n) => n as u16,
        PlanesKept::All => u16::MAX,
    };
    out.sort_by(|a, b| {
        a.stream_nt
            .cmp(&b.stream_nt)
            .then_with(|| {
                let lhs = a.step.num() as u64 * b.step.den() as u64;
                lhs.cmp(&(b.step.num() as u64 * a.step.den() as u64))
            })
            .then_with(|| kept_rank(a.planes_kept).cmp(&kept_rank(b.planes_kept)))
    });
    Ok(out)
}

fn format_psnr(v: f64) -> String {
    if v.is_infinite() {
        "inf".to_string()
    } else {
        format!("{v:.4}")
    }
}

pub fn rd_csv(points: &[RdPoint]) -> String {
    let mut out = String::from(RD_CSV_HEADER);
    out.push('\n');
    for p in points {
        out.push_str(&format!(
            "{},{},{:.6},{}\n",
            p.step,
            p.planes_kept,
            p.rate_nt_per_pixel(),
            format_psnr(p.psnr_db)
        ));
    }
    out
}

pub fn cmd_rd_sweep(
    input: &Path,
    csv: &Path,
    levels: u8,
    points: &[(Step, PlanesKept)],
) -> Result<Vec<RdPoint>> {
    let img = parse_pgm(&fs::read(input)?)?;
    let result = rd_sweep(&img, levels, points)?;
    fs::write(csv, rd_csv(&result))?;
    Ok(result)
}
