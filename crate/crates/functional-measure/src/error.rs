use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("{what} {size} exceeds the cap {cap}")]
    Capacity { what: &'static str, size: usize, cap: usize },
    #[error("quadrature did not converge: last change {change:e} after {refinements} refinements")]
    NoConvergence { change: f64, refinements: usize },
    #[error("csv: {0}")]
    Csv(String),
}

impl From<csv::Error> for MeasureError {
    fn from(e: csv::Error) -> Self {
        MeasureError::Csv(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, MeasureError>;
