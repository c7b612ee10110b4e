use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller broke an operation's precondition (length mismatch, unknown
    /// context id, out-of-range digit).
    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("invalid codeword {0:?}: third nucleotide repeats the second")]
    InvalidCodeword(String),

    #[error("invalid nucleotide {0:?}")]
    InvalidNucleotide(char),

    #[error("empty input")]
    EmptyInput,

    #[error("malformed overhead: {0}")]
    MalformedOverhead(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("payload checksum mismatch (stored {stored:08x}, computed {computed:08x})")]
    CorruptPayload { stored: u32, computed: u32 },

    #[error("capacity exceeded: {needed} oligos needed, index space holds {limit}")]
    CapacityExceeded { needed: u64, limit: u64 },

    #[error("missing oligos: {0:?}")]
    MissingOligo(Vec<u32>),

    #[error("conflicting duplicate records for oligo {0}")]
    InconsistentDuplicate(u32),

    #[error("invalid oligo {record}: {reason}")]
    InvalidOligo { record: String, reason: String },

    #[error("bad container magic {0:?}")]
    BadMagic([u8; 4]),

    #[error("truncated container: need {needed} digits, have {available}")]
    TruncatedContainer { needed: usize, available: usize },

    #[error("invalid FASTA at line {line}: {reason}")]
    InvalidFasta { line: usize, reason: String },

    #[error("invalid PGM: {0}")]
    InvalidPgm(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}
