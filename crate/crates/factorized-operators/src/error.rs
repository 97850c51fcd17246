use current_algebra_checks::CheckError;
use fock_lattice::LatticeError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FactorError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error("kernel domain error: {0}")]
    Domain(String),
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error("{what} is {size}, cap is {cap}")]
    Capacity { what: &'static str, size: usize, cap: usize },
    #[error("operator is not Hermitian (defect {defect:e}, scale {scale:e})")]
    NotHermitian { defect: f64, scale: f64 },
    #[error("eigensolver did not converge after {iterations} restarts: {converged} of {wanted} pairs, worst residual {worst_residual:e}")]
    NoConvergence { iterations: usize, converged: usize, wanted: usize, worst_residual: f64 },
}

pub type Result<T> = std::result::Result<T, FactorError>;
