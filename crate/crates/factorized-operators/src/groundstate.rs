//! Positivity of H^ and the annihilation of its lowest vector by every D(x).

use fock_lattice::FockSector;

use crate::error::Result;
use crate::factor::{density_pseudoinverse_sqrt, FactorSpec, Factorizer};
use crate::spectral::{dense_spectrum, eigensolve_dense};

#[derive(Debug, Clone, PartialEq)]
pub struct GroundStateReport {
    pub dim: usize,
    pub min_eigenvalue: f64,
    /// Spectral norm of H^ (its largest eigenvalue magnitude).
    pub norm: f64,
    /// max_x || (rho^+)^{1/2} D(x) Omega || for the lowest eigenvector Omega.
    pub max_local_defect: f64,
}

impl GroundStateReport {
    pub fn positive(&self, rel_tol: f64) -> bool {
        self.min_eigenvalue >= -rel_tol * self.norm
    }

    pub fn annihilated(&self, rel_tol: f64) -> bool {
        self.max_local_defect <= rel_tol * self.norm.sqrt()
    }
}

pub fn groundstate_check(sector: &FockSector, spec: &FactorSpec) -> Result<GroundStateReport> {
    let f = Factorizer::new(sector, *spec)?;
    let h = f.hierarchy(1)?;
    let spectrum = dense_spectrum(&h)?;
    let norm = spectrum.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let ground = eigensolve_dense(&h, 1)?;
    let omega = &ground.eigenvectors.as_ref().expect("dense path returns vectors")[0];
    let mut worst: f64 = 0.0;
    for x in 0..sector.n_sites() {
        let v = density_pseudoinverse_sqrt(sector, x)?.matvec(&f.d(x)?.matvec(omega));
        worst = worst.max(v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());
    }
    Ok(GroundStateReport { dim: sector.dim(), min_eigenvalue: spectrum[0], norm, max_local_defect: worst })
}
