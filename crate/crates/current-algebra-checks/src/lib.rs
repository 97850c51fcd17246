//! Lattice checks of the current algebra generated by smeared densities and
//! currents, and of the density normal-ordering identities.

pub mod checks;
pub mod convergence;
pub mod error;
pub mod smearing;

pub use checks::{
    bracket_residuals, check_current_algebra, check_normal_ordering, fourier_probes, BracketResiduals,
    CurrentAlgebraCase, CurrentAlgebraReport, NormalOrderingReport,
};
pub use convergence::{fit_order, ConvergenceRecord};
pub use error::{CheckError, Result};
pub use smearing::{field_bracket, smear_current, smear_density, SmearingFunction};
