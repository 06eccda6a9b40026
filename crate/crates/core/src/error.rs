use std::path::PathBuf;

use crate::dataset::Year;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("input not found: {}", .0.display())]
    InputNotFound(PathBuf),

    #[error("missing file {}", .0.display())]
    MissingFile(PathBuf),

    #[error("failed to read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{file}: no observations")]
    NoObservations { file: String },

    #[error("{file}: unknown column `{column}`")]
    UnknownColumn { file: String, column: String },

    #[error("{file}: missing column `{column}`")]
    MissingColumn { file: String, column: String },

    #[error("{file} line {line}: {message}")]
    MalformedRow {
        file: String,
        line: u64,
        message: String,
    },

    #[error("{file} line {line}: unknown asset code `{code}`")]
    UnknownAsset {
        file: String,
        line: u64,
        code: String,
    },

    #[error("{file} line {line}: duplicate cell {cell}")]
    DuplicateCell {
        file: String,
        line: u64,
        cell: String,
    },

    #[error("gap in series {series} at {year}")]
    Gap { series: String, year: Year },

    #[error("series {series} has no value at {year}")]
    MissingYear { series: String, year: Year },

    #[error("non-positive value {value} in series {series} at {year}")]
    NonPositive {
        series: String,
        year: Year,
        value: f64,
    },

    #[error("invalid share {value}: shares must be finite and non-negative")]
    InvalidShare { value: f64 },

    #[error("shares at {year}: {message}")]
    InvalidShares { year: Year, message: String },

    #[error("no shares recorded for {year}")]
    MissingShares { year: Year },

    #[error("asset {asset} has a non-zero share but no capital service series")]
    MissingAssetSeries { asset: String },

    #[error("industry {industry} has no TFP growth at {year}")]
    MissingTfp { industry: String, year: Year },

    #[error("unknown industry `{0}`")]
    UnknownIndustry(String),

    #[error("commodity flow not applicable to software")]
    SoftwareNotEligible,

    #[error("{0}")]
    InvalidFlows(String),

    #[error("allocation ratio {value} outside [0, 1]")]
    InvalidRatio { value: f64 },

    #[error("denominator is zero: {0}")]
    ZeroDenominator(String),

    #[error("GDP must be positive, got {value}")]
    NonPositiveGdp { value: f64 },

    #[error("missing GDP series for {0}")]
    MissingGdp(String),

    #[error("classification config {}: {message}", path.display())]
    Config { path: PathBuf, message: String },

    #[error("bundle holds {0} countries; select one explicitly")]
    AmbiguousCountry(usize),

    #[error("country `{0}` not present in bundle")]
    UnknownCountry(String),

    #[error("validation failed with {errors} error(s):\n{details}")]
    Validation { errors: usize, details: String },

    #[error("invalid argument: {0}")]
    Usage(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit status for this error: 2 for usage and I/O problems, 1 for
    /// everything that is a property of the data.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InputNotFound(_)
            | Error::MissingFile(_)
            | Error::Io { .. }
            | Error::Config { .. }
            | Error::Usage(_) => 2,
            _ => 1,
        }
    }
}
