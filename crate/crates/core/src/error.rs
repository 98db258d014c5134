use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} must be a finite number, got {value}")]
    NonFinite { what: &'static str, value: f64 },

    #[error("{what} = {value} is outside the legal range {range}")]
    OutOfDomain {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("raw score {raw} lies outside the scale range [{r_min}, {r_max}]")]
    OutOfScaleRange { raw: f64, r_min: f64, r_max: f64 },

    #[error("degenerate scale range: {0}")]
    DegenerateRange(String),

    #[error("{what} must not be empty")]
    EmptyInput { what: &'static str },

    #[error("{what}[{index}] = {value} is outside the legal range {range}")]
    ElementOutOfDomain {
        what: &'static str,
        index: usize,
        value: f64,
        range: &'static str,
    },

    #[error(
        "{what} = {value} is not representable in thousandths; \
         use the floating differentiation path with an explicit epsilon"
    )]
    Precision { what: &'static str, value: f64 },

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("row {row}: {reason}")]
    InvalidRecord { row: usize, reason: String },
}
