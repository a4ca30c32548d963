use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("feedback for a {expected} sample received a {actual} sample")]
    LabelMismatch {
        expected: &'static str,
        actual:   &'static str
    },

    #[error("dimension mismatch: expected {expected} features, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("literal class L3 is empty when the target uses every variable (m = n = {0})")]
    EmptyLiteralClass(usize),

    #[error("enumeration over 2^{n} samples exceeds the bound of 2^{max}")]
    EnumerationBound { n: usize, max: usize },

    #[error("malformed snapshot at line {line}: {reason}")]
    Snapshot { line: usize, reason: String },

    #[error("malformed CSV: {0}")]
    Csv(String),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path:   PathBuf,
        #[source]
        source: std::io::Error
    }
}

pub type Result<T> = std::result::Result<T, Error>;
