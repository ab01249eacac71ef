//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by sample construction, grid search, inference and the
/// study harness.
#[derive(Debug, Error)]
pub enum Error {
    /// Paired input vectors have different lengths.
    #[error("x and y have different lengths ({x} vs {y})")]
    LengthMismatch { x: usize, y: usize },

    /// Not enough points for the requested operation.
    #[error("sample has {n} points but at least {min} are required")]
    TooFewPoints { n: usize, min: usize },

    /// NaN or infinity in the input data.
    #[error("non-finite value at index {index} on the {axis} axis")]
    NonFinite { axis: &'static str, index: usize },

    /// An axis cannot be split into the requested number of bins without
    /// splitting a tie group or leaving a bin empty. Callers typically treat
    /// the affected grid shape as unattainable.
    #[error("cannot split the {axis} axis into {requested} non-empty bins ({groups} tie groups)")]
    DegenerateAxis {
        axis: &'static str,
        requested: usize,
        groups: usize,
    },

    /// Grid cut positions are out of range, unsorted or duplicated.
    #[error("invalid grid cuts: {reason}")]
    InvalidCuts { reason: String },

    /// A parameter is outside its valid range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    /// Input exceeds a hard limit of the exhaustive search.
    #[error("{what} = {value} exceeds the exhaustive-search limit of {max}")]
    SizeLimit {
        what: &'static str,
        value: usize,
        max: usize,
    },

    /// A null table was built for a different sample size.
    #[error("null table was built for n = {table} but the sample has n = {sample}")]
    TableSampleMismatch { table: usize, sample: usize },

    /// A null table was built for a different statistic.
    #[error("null table holds `{table}` but `{requested}` was requested")]
    TableStatMismatch { table: String, requested: String },

    /// A text input (CSV data, config file, table file) failed to parse.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A structured file has the wrong version or a malformed header.
    #[error("{0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
