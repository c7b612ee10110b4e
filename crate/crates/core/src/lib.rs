//! Encodes files and grayscale images into homopolymer-constrained DNA
//! oligos.
//!
//! The pipeline is: binary source → context-adaptive arithmetic coder with
//! base-48 output ([`arith48`]) → container with a byte-transcoded header
//! ([`formats`], [`transcoder`]) → 3-nt constrained codewords
//! ([`constrained_code`]) → fixed-length indexed oligos ([`oligo`]).
//! [`image_codec`] supplies the wavelet/bit-plane front end for images.

pub mod arith48;
pub mod cli;
pub mod constrained_code;
pub mod error;
pub mod formats;
pub mod image_codec;
pub mod oligo;
pub mod transcoder;

pub use constrained_code::{Codeword3, Digit48, DigitStream, Nucleotide};
pub use error::{Error, Result};
