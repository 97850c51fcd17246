//! Bosonic Fock sectors on a periodic 1-D grid.
//!
//! A [`FockSector`] enumerates the occupation-number basis for N bosons on n
//! sites in ascending lexicographic order. Operators are complex sparse matrices
//! ([`SparseOperator`]) acting on one sector or mapping between adjacent ones.

pub mod error;
pub mod grid;
pub mod operators;
pub mod permanent;
pub mod probe;
pub mod sector;
pub mod sparse;

pub use error::{LatticeError, Result};
pub use grid::LatticeGrid;
pub use operators::{
    current_matrix, density_matrix, field_annihilation, field_creation, gradient_density_matrix,
    k_matrix, kinetic_matrix, ladder_annihilation, normal_ordered_pair, normal_ordered_triple,
    number_operator, occupations_at, FieldSet, Stencil,
};
pub use permanent::{permanent, permanent_naive, symmetrized_inner, symmetrized_inner_bruteforce};
pub use probe::{sample_symmetric, ProbeSet};
pub use sector::{build_sector, build_sector_with_cap, FockSector, OccupationState, DEFAULT_DIMENSION_CAP};
pub use sparse::{relative_commutator, SparseOperator, C64};
