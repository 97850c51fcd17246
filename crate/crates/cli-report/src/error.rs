use thiserror::Error;

use current_algebra_checks::CheckError;
use factorized_operators::FactorError;
use fock_lattice::LatticeError;
use functional_measure::MeasureError;
use jastrow_analytic::JastrowError;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("io error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    /// Runtime failures inside a check count as check failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Capacity(_) => EXIT_CAPACITY,
            CliError::Io { .. } | CliError::Runtime(_) => EXIT_FAIL,
        }
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::Capacity { .. } => CliError::Capacity(e.to_string()),
            LatticeError::InvalidGrid(_) => CliError::Config(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<CheckError> for CliError {
    fn from(e: CheckError) -> Self {
        match e {
            CheckError::Lattice(l) => l.into(),
            CheckError::Invalid(_) => CliError::Config(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<FactorError> for CliError {
    fn from(e: FactorError) -> Self {
        match e {
            FactorError::Lattice(l) => l.into(),
            FactorError::Check(c) => c.into(),
            FactorError::Capacity { .. } => CliError::Capacity(e.to_string()),
            FactorError::Invalid(_) | FactorError::Domain(_) => CliError::Config(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<JastrowError> for CliError {
    fn from(e: JastrowError) -> Self {
        match e {
            JastrowError::Invalid(_) => CliError::Config(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<MeasureError> for CliError {
    fn from(e: MeasureError) -> Self {
        match e {
            MeasureError::Capacity { .. } => CliError::Capacity(e.to_string()),
            MeasureError::Invalid(_) | MeasureError::Domain(_) => CliError::Config(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
