//! Closed-form Jastrow ground states of the periodic inverse-square model, its
//! rational limit and the harmonic oscillator, evaluated pointwise in
//! continuous space. The eigenvalue identity H Omega = E Omega becomes a
//! statement about the local energy at each configuration.

pub mod batch;
pub mod checks;
pub mod error;
pub mod eval;
pub mod model;

pub use batch::{evaluate_batch, evaluate_configuration, read_configurations, run_batch, write_batch, BatchRow};
pub use checks::{
    cms_energy_per_length, energy_statistics, finite_diff_drift_check, finite_diff_laplacian_check,
    rational_energy_density, relative_error, sample_local_energies, DerivativeEntry, DerivativeReport,
    EnergyStatistics,
};
pub use error::{JastrowError, Result};
pub use eval::{
    complex_step_drift, drift, dunkl_apply, groundstate_energy, laplacian_log_psi, local_energy, log_psi, potential,
};
pub use model::{Domain, JastrowModel, ParticleConfiguration};
