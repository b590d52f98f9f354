use thiserror::Error;

/// Errors raised by every conekit operation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("lines {first} and {second} coincide")]
    DuplicateLine { first: usize, second: usize },

    #[error("weight {value} of line {index} lies outside (0, 1)")]
    WeightOutOfRange { index: usize, value: String },

    #[error("multiple point {location} is not stable ({class})")]
    NotStable { location: String, class: String },

    #[error("arrangement is not generic: a point of multiplicity {multiplicity} exists")]
    NotGeneric { multiplicity: usize },

    #[error("arrangement is not Calabi-Yau: sum of (1 - beta) is {sum}")]
    NotCalabiYau { sum: String },

    #[error("cone is not a product of two flat cones")]
    NotProduct,

    #[error("unsupported cone: {0}")]
    UnsupportedCone(String),

    #[error("invalid germ: {0}")]
    InvalidGerm(String),

    #[error("pair is not klt: {0}")]
    NonKlt(String),

    #[error("configuration outside the model: {0}")]
    OutOfModel(String),

    #[error("path clearance {clearance:e} is below the minimum {minimum:e}")]
    PathTooClose { clearance: f64, minimum: f64 },

    #[error("negative link eigenvalue {0}")]
    InvalidEigenvalue(String),

    #[error("invalid mode: {0}")]
    InvalidMode(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numerical failure: {message} (error estimate {estimate:e})")]
    NumericFailure { message: String, estimate: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
