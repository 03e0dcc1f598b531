//! Crate-wide error type.

use std::path::PathBuf;

/// Errors produced by the library and the experiment harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A quaternion coefficient or arithmetic result is NaN or infinite.
    #[error("non-finite quaternion coefficient: {0}")]
    NonFinite(f64),

    /// A Minkowski exponent below 1 (or non-finite) was supplied.
    #[error("invalid p-norm exponent {0}: p must be finite and >= 1")]
    InvalidExponent(f64),

    /// A projection exponent fell outside the feasible interval.
    #[error("exponent {p} outside [1, {p_max}]")]
    ExponentOutOfRange { p: f64, p_max: f64 },

    /// Lower/upper bounds are not finite or not strictly ordered.
    #[error("invalid bounds [{lower}, {upper}]: need finite lower < upper")]
    InvalidBounds { lower: f64, upper: f64 },

    /// Two sequences that must have equal length do not.
    #[error("shape mismatch: expected length {expected}, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    /// A benchmark name not present in the registry.
    #[error("unknown benchmark function `{0}`")]
    UnknownFunction(String),

    /// A dimension the named benchmark does not accept.
    #[error("invalid dimension {n} for `{name}`: minimum is {min}")]
    InvalidDimension {
        name: String,
        n: usize,
        min: usize,
    },

    /// An evaluation input outside the benchmark's bounds.
    #[error("input x[{index}] = {value} outside bounds [{lower}, {upper}]")]
    OutOfDomain {
        index: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },

    /// A configuration value that fails validation.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// All paired differences are zero; the signed-rank test is undefined.
    #[error("degenerate sample: all paired differences are zero")]
    DegenerateSample,

    /// A (function, n) cell has fewer records than its peers.
    #[error("incomplete cell {function} n={n}: {got} of {expected} records")]
    IncompleteCell {
        function: String,
        n: usize,
        got: usize,
        expected: usize,
    },

    /// A results file line that fails to parse.
    #[error("malformed record at {path}:{line}: {source}")]
    MalformedRecord {
        path: PathBuf,
        line: usize,
        #[source]
        source: serde_json::Error,
    },

    /// A record written by an unsupported schema revision.
    #[error("unsupported record schema version {found} (expected {expected})")]
    UnsupportedSchema { found: u32, expected: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
