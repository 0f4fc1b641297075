//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by grid ingestion, metrics, generators, and dataset handling.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("empty input")]
    EmptyInput,

    #[error("malformed header: {0}")]
    MalformedHeader(String),

    #[error("inconsistent row length at line {line}: expected {expected}, got {got}")]
    InconsistentRow {
        line: usize,
        expected: usize,
        got: usize,
    },

    #[error("invalid cell character {found:?} at line {line}")]
    InvalidCell { line: usize, found: char },

    #[error("unsupported maxval {0} (must be 1..=255)")]
    UnsupportedMaxval(u32),

    #[error("truncated pixel data: expected {expected} bytes, got {got}")]
    TruncatedData { expected: usize, got: usize },

    #[error("invalid grid dimensions {width}x{height}")]
    BadDimensions { width: usize, height: usize },

    #[error("cell buffer length {len} does not match {width}x{height}")]
    CellCountMismatch {
        width: usize,
        height: usize,
        len: usize,
    },

    #[error("cell values must be 0 or 1, found {0}")]
    NonBinaryCell(u8),

    #[error("grid too small for n=16 windows: {width}x{height} (need at least 4x4)")]
    GridTooSmall { width: usize, height: usize },

    #[error("empty settlement: grid has no built cells")]
    EmptySettlement,

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("no swap possible: start grid is homogeneous")]
    NoSwapPossible,

    #[error("duplicate label {0:?} in dataset")]
    DuplicateLabel(String),

    #[error("invalid band {name:?}: {reason}")]
    InvalidBand { name: String, reason: String },

    #[error("cluster count {k} out of range for {points} points")]
    BadClusterCount { k: usize, points: usize },

    #[error("scatter axes must differ")]
    SameAxes,

    #[error("csv parse error at line {line}: {reason}")]
    CsvParse { line: usize, reason: String },

    #[error("band table parse error: {0}")]
    BandParse(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
