//! Factorizing operators D(x) = K(x) - sum_y dx phi(x, y) :rho(x) rho(y): on
//! lattice Fock sectors, the positive operators H^ = sum_x dx D^+ rho^+ D and
//! their power hierarchy, direct model Hamiltonians, and checks relating them.

pub mod equivalence;
pub mod error;
pub mod factor;
pub mod groundstate;
pub mod hierarchy;
pub mod kernel;
pub mod model;
pub mod spectral;

pub use equivalence::{
    check_coulomb_regularization, check_equivalence, factorized_gram, factorized_hamiltonian, EquivalenceReport,
    RegularizationReport,
};
pub use error::{FactorError, Result};
pub use factor::{
    d_matrix, density_pseudoinverse, h_local, hhat_matrix, hhat_with, hierarchy_matrix, FactorSpec, Factorizer,
    HIERARCHY_POWER_CAP,
};
pub use groundstate::{groundstate_check, GroundStateReport};
pub use hierarchy::{check_hierarchy_commutation, separation_convergence, HierarchyReport};
pub use kernel::{coulomb_s, kernel_eval, KernelSpec};
pub use model::{
    cms_e_operator, cms_ground_energy, model_factorization, model_hamiltonian, model_hamiltonian_with, Factorization,
    ModelKind, ModelSpec,
};
pub use spectral::{eigensolve, eigensolve_dense, eigensolve_iterative, IterativeOptions, SolverMethod, SpectralResult};
