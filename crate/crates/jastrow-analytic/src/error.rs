use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JastrowError {
    #[error("particles {j} and {k} are {separation:e} apart, below the minimum separation {min_sep:e}")]
    Singular { j: usize, k: usize, separation: f64, min_sep: f64 },
    #[error("operation not supported for this model: {0}")]
    Unsupported(&'static str),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("csv: {0}")]
    Csv(String),
}

impl From<csv::Error> for JastrowError {
    fn from(e: csv::Error) -> Self {
        JastrowError::Csv(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, JastrowError>;
