use thiserror::Error;

/// Errors raised when a value violates a model invariant or an operation
/// receives out-of-domain input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{field}: rate must be a positive finite number of bits per nanosecond, got {value}")]
    InvalidRate { field: &'static str, value: f64 },

    #[error("{field}: ratio must lie in [0, 1], got {value}")]
    InvalidRatio { field: &'static str, value: f64 },

    #[error("{field}: duration must be a non-negative finite number of nanoseconds, got {value}")]
    InvalidDuration { field: &'static str, value: f64 },

    #[error("{field}: count must be at least 1, got {value}")]
    InvalidCount { field: &'static str, value: u64 },

    #[error("{field}: must not be empty")]
    Empty { field: &'static str },

    #[error("{field}: bit size overflows a 64-bit count")]
    Overflow { field: &'static str },

    #[error("classification thresholds need high_min > average_min > 0, got {high_min} and {average_min}")]
    InvalidThresholds { high_min: f64, average_min: f64 },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("truncated normal sampler produced no positive rate after {attempts} attempts")]
    SamplerExhausted { attempts: u64 },

    #[error("{what}: expected a non-empty input")]
    EmptyInput { what: &'static str },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Name of the offending field, when the error is tied to one.
    pub fn field(&self) -> Option<&'static str> {
        match self {
            Error::InvalidRate { field, .. }
            | Error::InvalidRatio { field, .. }
            | Error::InvalidDuration { field, .. }
            | Error::InvalidCount { field, .. }
            | Error::Empty { field }
            | Error::Overflow { field } => Some(field),
            _ => None,
        }
    }
}

pub(crate) fn check_rate(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidRate { field, value })
    }
}

pub(crate) fn check_ratio(field: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::InvalidRatio { field, value })
    }
}

pub(crate) fn check_duration(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidDuration { field, value })
    }
}

pub(crate) fn check_positive_duration(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidDuration { field, value })
    }
}

pub(crate) fn check_count(field: &'static str, value: u64) -> Result<u64> {
    if value >= 1 {
        Ok(value)
    } else {
        Err(Error::InvalidCount { field, value })
    }
}
