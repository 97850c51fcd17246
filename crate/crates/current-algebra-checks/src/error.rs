use fock_lattice::LatticeError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CheckError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("length mismatch: smearing has {got} samples, grid has {expected} sites")]
    LengthMismatch { got: usize, expected: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, CheckError>;
