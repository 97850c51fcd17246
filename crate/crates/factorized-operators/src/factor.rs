//! D(x), the pseudo-inverse density, the local Gram operators h(x) = D^+ rho^+ D
//! and their sums.
//!
//! D(x) = psi_x^+ C_x with C_x = (D psi)_x - psi_x a_x + omega x~ psi_x, where
//! a_x = sum_{y != x} phi(x, y) n_y collects the interaction. Since
//! psi_x rho_x^+ psi_x^+ is the identity on the (N-1)-sector, h(x) = C_x^+ C_x.

use fock_lattice::{
    density_matrix, occupations_at, FieldSet, FockSector, SparseOperator, Stencil, C64,
};

use crate::error::{FactorError, Result};
use crate::kernel::{kernel_eval, KernelSpec};

pub const HIERARCHY_POWER_CAP: u32 = 4;
const HERMITICITY_TOLERANCE: f64 = 1e-13;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Everything entering D(x): an optional two-point kernel, an optional
/// harmonic drift omega * (x - l/2) rho(x), and the difference stencil in K.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorSpec {
    pub kernel: Option<KernelSpec>,
    pub external_frequency: f64,
    pub stencil: Stencil,
}

impl FactorSpec {
    pub fn free() -> Self {
        Self { kernel: None, external_frequency: 0.0, stencil: Stencil::Central }
    }

    pub fn from_kernel(kernel: KernelSpec) -> Self {
        Self { kernel: Some(kernel), ..Self::free() }
    }

    pub fn oscillator(omega: f64) -> Self {
        Self { external_frequency: omega, ..Self::free() }
    }

    pub fn with_stencil(mut self, stencil: Stencil) -> Self {
        self.stencil = stencil;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(k) = &self.kernel {
            k.validate()?;
        }
        if !self.external_frequency.is_finite() {
            return Err(FactorError::Invalid("external frequency must be finite".into()));
        }
        Ok(())
    }
}

/// Interaction weights a_x(state) = sum_{y != x} phi(x, y) n_y for every basis state.
pub fn interaction_weights(sector: &FockSector, site: usize, kernel: &KernelSpec) -> Result<Vec<f64>> {
    let grid = sector.grid();
    let phi: Vec<f64> = (0..grid.n_sites())
        .map(|y| if y == site { Ok(0.0) } else { kernel_eval(kernel, grid, site, y) })
        .collect::<Result<_>>()?;
    Ok(sector
        .basis()
        .map(|occ| occ.iter().zip(&phi).map(|(&k, p)| k as f64 * p).sum())
        .collect())
}

/// Assembles C_x for every site of one sector.
pub struct Factorizer<'a> {
    sector: &'a FockSector,
    fields: FieldSet,
    spec: FactorSpec,
}

impl<'a> Factorizer<'a> {
    pub fn new(sector: &'a FockSector, spec: FactorSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self { sector, fields: FieldSet::new(sector)?, spec })
    }

    pub fn sector(&self) -> &FockSector {
        self.sector
    }

    /// C_x, a map from the N-sector to the (N-1)-sector.
    pub fn reduced(&self, site: usize) -> Result<SparseOperator> {
        self.sector.grid().check_site(site)?;
        let psi = self.fields.psi(site);
        let mut c = self.fields.derivative(site, self.spec.stencil);
        if let Some(kernel) = &self.spec.kernel {
            let a = interaction_weights(self.sector, site, kernel)?;
            c = c.add_scaled(&psi.matmul(&SparseOperator::from_real_diagonal(&a)), re(-1.0));
        }
        if self.spec.external_frequency != 0.0 {
            let x = self.sector.grid().centered_coordinate(site);
            c = c.add_scaled(psi, re(self.spec.external_frequency * x));
        }
        Ok(c)
    }

    /// D(x) = psi_x^+ C_x on the N-sector.
    pub fn d(&self, site: usize) -> Result<SparseOperator> {
        Ok(self.fields.psi(site).adjoint().matmul(&self.reduced(site)?))
    }

    /// h(x) = D(x)^+ rho(x)^+ D(x), assembled literally.
    pub fn local(&self, site: usize) -> Result<SparseOperator> {
        let d = self.d(site)?;
        let pinv = density_pseudoinverse(self.sector, site)?;
        Ok(d.adjoint().matmul(&pinv).matmul(&d))
    }

    /// h(x) through the reduced form C_x^+ C_x.
    pub fn local_reduced(&self, site: usize) -> Result<SparseOperator> {
        let c = self.reduced(site)?;
        Ok(c.adjoint().matmul(&c))
    }

    /// sum_x dx h(x)^p.
    pub fn hierarchy(&self, p: u32) -> Result<SparseOperator> {
        if p == 0 || p > HIERARCHY_POWER_CAP {
            return Err(FactorError::Capacity { what: "hierarchy power", size: p as usize, cap: HIERARCHY_POWER_CAP as usize });
        }
        let dim = self.sector.dim();
        let dx = self.sector.grid().spacing();
        let mut acc = SparseOperator::zeros(dim, dim);
        for x in 0..self.sector.n_sites() {
            acc = acc.add_scaled(&self.local_reduced(x)?.power(p), re(dx));
        }
        Ok(enforce_hermitian(acc, "hierarchy"))
    }
}

/// Returns (A + A^+)/2 when the Hermiticity defect exceeds 1e-13 relative; logs the defect.
pub fn enforce_hermitian(a: SparseOperator, label: &str) -> SparseOperator {
    let defect = a.hermiticity_defect();
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    log::debug!("{label}: hermiticity defect {defect:e} (scale {scale:e})");
    if defect > HERMITICITY_TOLERANCE * scale {
        log::warn!("{label}: symmetrizing, defect {defect:e} exceeds tolerance");
        a.hermitian_part()
    } else {
        a
    }
}

/// D(x) with the central stencil and no external drift.
pub fn d_matrix(sector: &FockSector, site: usize, kernel: &KernelSpec) -> Result<SparseOperator> {
    Factorizer::new(sector, FactorSpec::from_kernel(*kernel))?.d(site)
}

/// Moore-Penrose pseudo-inverse of rho(x): dx / n_x on occupied states, 0 elsewhere.
pub fn density_pseudoinverse(sector: &FockSector, site: usize) -> Result<SparseOperator> {
    sector.grid().check_site(site)?;
    let dx = sector.grid().spacing();
    let d: Vec<f64> = occupations_at(sector, site)
        .into_iter()
        .map(|k| if k > 0.0 { dx / k } else { 0.0 })
        .collect();
    Ok(SparseOperator::from_real_diagonal(&d))
}

/// rho(x)^{1/2} pseudo-inverse: sqrt(dx / n_x) on occupied states.
pub fn density_pseudoinverse_sqrt(sector: &FockSector, site: usize) -> Result<SparseOperator> {
    let p = density_pseudoinverse(sector, site)?;
    Ok(SparseOperator::from_real_diagonal(&p.diagonal().iter().map(|z| z.re.sqrt()).collect::<Vec<_>>()))
}

pub fn h_local(sector: &FockSector, site: usize, spec: &FactorSpec) -> Result<SparseOperator> {
    Factorizer::new(sector, *spec)?.local(site)
}

/// H^ = sum_x dx D^+ rho^+ D for the given kernel (central stencil).
pub fn hhat_matrix(sector: &FockSector, kernel: &KernelSpec) -> Result<SparseOperator> {
    hierarchy_matrix(sector, kernel, 1)
}

pub fn hierarchy_matrix(sector: &FockSector, kernel: &KernelSpec, p: u32) -> Result<SparseOperator> {
    Factorizer::new(sector, FactorSpec::from_kernel(*kernel))?.hierarchy(p)
}

pub fn hhat_with(sector: &FockSector, spec: &FactorSpec) -> Result<SparseOperator> {
    Factorizer::new(sector, *spec)?.hierarchy(1)
}

/// rho rho^+ rho - rho, for checking the pseudo-inverse.
pub fn pseudoinverse_defect(sector: &FockSector, site: usize) -> Result<f64> {
    let rho = density_matrix(sector, site)?;
    let p = density_pseudoinverse(sector, site)?;
    Ok((&rho.matmul(&p).matmul(&rho) - &rho).max_abs())
}
