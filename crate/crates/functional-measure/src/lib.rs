//! The Poisson point measure on a box and its generating functional
//! L(f) = E exp(i sum_j f(c_j)). Monte Carlo estimates are compared with the
//! closed forms exp(rho int (e^{if} - 1)) and (rho int f)^n.
//!
//! Test functions are assumed to live on the same finite box as the ensemble.

pub mod closed;
pub mod ensemble;
pub mod error;
pub mod estimate;
pub mod gram;
pub mod testfn;

pub use closed::{
    factorial_moment_closed_form, gaussian_box, gaussian_widths, oscillator_matrix_element,
    oscillator_matrix_element_converged, poisson_closed_form, poisson_closed_form_converged, refine_dyadic, Converged,
};
pub use ensemble::{sample_configuration, PointConfiguration, PoissonEnsemble};
pub use error::{MeasureError, Result};
pub use estimate::{
    characteristic_functional_mc, elementary_symmetric, eta_pairing, normal_ordered_moment_mc, MCEstimate,
};
pub use gram::{positive_definiteness_check, GramReport};
pub use testfn::{reference_functions, BoxDomain, TestFunctionGrid};
