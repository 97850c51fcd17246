//! Elementary second-quantized operators on a sector.
//!
//! Fields are normalized as psi_i = a_i / sqrt(dx), so [psi_i, psi_j^+] = delta_ij / dx.
//! The central difference is (D f)_i = (f_{i+1} - f_{i-1}) / (2 dx); the forward
//! difference is (f_{i+1} - f_i) / dx.

use num_complex::Complex64;

use crate::error::Result;
use crate::sector::FockSector;
use crate::sparse::{SparseOperator, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    Central,
    Forward,
}

fn re(x: f64) -> C64 {
    Complex64::new(x, 0.0)
}

/// Bosonic ladder a_i mapping sector N to sector N-1 (no 1/sqrt(dx) factor).
pub fn ladder_annihilation(sector: &FockSector, site: usize) -> Result<SparseOperator> {
    sector.grid().check_site(site)?;
    let n_lower = sector.particle_count().checked_sub(1);
    let Some(n_lower) = n_lower else {
        return Ok(SparseOperator::zeros(0, sector.dim()));
    };
    let lower_dim = crate::sector::sector_dimension(sector.n_sites(), n_lower) as usize;
    let mut triplets = Vec::with_capacity(sector.dim());
    let mut buf = vec![0u8; sector.n_sites()];
    for (col, occ) in sector.basis().enumerate() {
        let k = occ[site];
        if k == 0 {
            continue;
        }
        buf.copy_from_slice(occ);
        buf[site] -= 1;
        let row = sector.rank_any(&buf).expect("lower state has a rank");
        triplets.push((row, col, re((k as f64).sqrt())));
    }
    Ok(SparseOperator::from_triplets(lower_dim, sector.dim(), triplets))
}

/// Field psi_i: sector N -> N-1 with matrix element sqrt(n_i/dx). Zero map for N = 0.
pub fn field_annihilation(sector: &FockSector, site: usize) -> Result<SparseOperator> {
    let a = ladder_annihilation(sector, site)?;
    Ok(a.scale_real(1.0 / sector.grid().spacing().sqrt()))
}

/// Field psi_i^+: sector N-1 -> N, the adjoint of [`field_annihilation`] on `sector`.
pub fn field_creation(sector: &FockSector, site: usize) -> Result<SparseOperator> {
    Ok(field_annihilation(sector, site)?.adjoint())
}

/// Occupation of `site` in every basis state.
pub fn occupations_at(sector: &FockSector, site: usize) -> Vec<f64> {
    sector.basis().map(|o| o[site] as f64).collect()
}

/// rho_i = n_i / dx.
pub fn density_matrix(sector: &FockSector, site: usize) -> Result<SparseOperator> {
    sector.grid().check_site(site)?;
    let dx = sector.grid().spacing();
    let d: Vec<f64> = occupations_at(sector, site).into_iter().map(|k| k / dx).collect();
    Ok(SparseOperator::from_real_diagonal(&d))
}

/// N times the identity.
pub fn number_operator(sector: &FockSector) -> SparseOperator {
    SparseOperator::scaled_identity(sector.dim(), re(sector.particle_count() as f64))
}

/// All fields psi_i of a sector, assembled once.
#[derive(Debug, Clone)]
pub struct FieldSet {
    fields: Vec<SparseOperator>,
    spacing: f64,
    n_sites: usize,
}

impl FieldSet {
    pub fn new(sector: &FockSector) -> Result<Self> {
        let fields = (0..sector.n_sites())
            .map(|i| field_annihilation(sector, i))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { fields, spacing: sector.grid().spacing(), n_sites: sector.n_sites() })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn psi(&self, site: usize) -> &SparseOperator {
        &self.fields[site]
    }

    /// Difference of fields at `site` under `stencil` (a map N -> N-1).
    pub fn derivative(&self, site: usize, stencil: Stencil) -> SparseOperator {
        let n = self.n_sites as isize;
        let wrap = |k: isize| k.rem_euclid(n) as usize;
        let i = site as isize;
        match stencil {
            Stencil::Central => {
                let h = 0.5 / self.spacing;
                self.fields[wrap(i + 1)].add_scaled(&self.fields[wrap(i - 1)], re(-1.0)).scale_real(h)
            }
            Stencil::Forward => {
                let h = 1.0 / self.spacing;
                self.fields[wrap(i + 1)].add_scaled(&self.fields[site], re(-1.0)).scale_real(h)
            }
        }
    }

    /// psi_i^+ (D psi)_i with the central stencil.
    pub fn psi_dag_dpsi(&self, site: usize) -> SparseOperator {
        self.fields[site].adjoint().matmul(&self.derivative(site, Stencil::Central))
    }

    /// (D psi^+)_i psi_i with the central stencil.
    pub fn dpsi_dag_psi(&self, site: usize) -> SparseOperator {
        self.derivative(site, Stencil::Central).adjoint().matmul(&self.fields[site])
    }

    /// J_i = (psi^+ D psi - (D psi^+) psi) / (2i).
    pub fn current(&self, site: usize) -> SparseOperator {
        let diff = self.psi_dag_dpsi(site).add_scaled(&self.dpsi_dag_psi(site), re(-1.0));
        diff.scale(Complex64::new(0.0, -0.5))
    }

    /// Lattice density gradient in product-rule form, psi^+ (D psi) + (D psi^+) psi.
    pub fn gradient_density(&self, site: usize) -> SparseOperator {
        self.psi_dag_dpsi(site).add_scaled(&self.dpsi_dag_psi(site), re(1.0))
    }

    /// K_i = grad(rho)_i / 2 + i J_i.
    pub fn k(&self, site: usize) -> SparseOperator {
        self.gradient_density(site)
            .scale_real(0.5)
            .add_scaled(&self.current(site), Complex64::new(0.0, 1.0))
    }

    /// coefficient * sum_i dx (D psi)_i^+ (D psi)_i.
    pub fn gram_kinetic(&self, stencil: Stencil, coefficient: f64, dim: usize) -> SparseOperator {
        let mut acc = SparseOperator::zeros(dim, dim);
        for i in 0..self.n_sites {
            let d = self.derivative(i, stencil);
            acc = acc.add_scaled(&d.adjoint().matmul(&d), re(coefficient * self.spacing));
        }
        acc
    }
}

pub fn current_matrix(sector: &FockSector, site: usize) -> Result<SparseOperator> {
    sector.grid().check_site(site)?;
    Ok(FieldSet::new(sector)?.current(site))
}

pub fn gradient_density_matrix(sector: &FockSector, site: usize) -> Result<SparseOperator> {
    sector.grid().check_site(site)?;
    Ok(FieldSet::new(sector)?.gradient_density(site))
}

pub fn k_matrix(sector: &FockSector, site: usize) -> Result<SparseOperator> {
    sector.grid().check_site(site)?;
    Ok(FieldSet::new(sector)?.k(site))
}

/// Kinetic energy (1/2) sum_i dx (D+ psi)^+ (D+ psi) with forward differences.
pub fn kinetic_matrix(sector: &FockSector) -> Result<SparseOperator> {
    Ok(FieldSet::new(sector)?.gram_kinetic(Stencil::Forward, 0.5, sector.dim()))
}

/// :rho_x rho_y: = psi_x^+ psi_y^+ psi_y psi_x, assembled from field products.
pub fn normal_ordered_pair(sector: &FockSector, x: usize, y: usize) -> Result<SparseOperator> {
    let n = sector.particle_count();
    if n < 2 {
        return Ok(SparseOperator::zeros(sector.dim(), sector.dim()));
    }
    let s1 = sector.with_particles(n - 1)?;
    let px = field_annihilation(sector, x)?;
    let py = field_annihilation(&s1, y)?;
    let inner = py.matmul(&px);
    Ok(inner.adjoint().matmul(&inner))
}

/// :rho_x rho_y rho_z: = psi_x^+ psi_y^+ psi_z^+ psi_z psi_y psi_x.
pub fn normal_ordered_triple(sector: &FockSector, x: usize, y: usize, z: usize) -> Result<SparseOperator> {
    let n = sector.particle_count();
    if n < 3 {
        return Ok(SparseOperator::zeros(sector.dim(), sector.dim()));
    }
    let s1 = sector.with_particles(n - 1)?;
    let s2 = sector.with_particles(n - 2)?;
    let inner = field_annihilation(&s2, z)?
        .matmul(&field_annihilation(&s1, y)?)
        .matmul(&field_annihilation(sector, x)?);
    Ok(inner.adjoint().matmul(&inner))
}

/// Diagonal of :rho_x rho_y: computed from occupations: n_x (n_y - delta_xy) / dx^2.
pub fn pair_density_diagonal(sector: &FockSector, x: usize, y: usize) -> Vec<f64> {
    let dx2 = sector.grid().spacing().powi(2);
    sector
        .basis()
        .map(|o| {
            let nx = o[x] as f64;
            let ny = o[y] as f64 - if x == y { 1.0 } else { 0.0 };
            nx * ny / dx2
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::LatticeGrid;
    use crate::sector::build_sector;

    fn sector(n: usize, dx: f64, np: usize) -> FockSector {
        build_sector(LatticeGrid::new(n, dx).unwrap(), np).unwrap()
    }

    #[test]
    fn single_site_field_entries() {
        let s = sector(1, 1.0, 1);
        let psi = field_annihilation(&s, 0).unwrap();
        assert_eq!(psi.shape(), (1, 1));
        assert_eq!(psi.get(0, 0).re, 1.0);

        let s = sector(1, 0.5, 1);
        let psi = field_annihilation(&s, 0).unwrap();
        assert!((psi.get(0, 0).re - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn bosonic_sqrt_rule() {
        let dx = 0.7;
        let s = sector(2, dx, 2);
        let s1 = s.with_particles(1).unwrap();
        let psi = field_annihilation(&s, 0).unwrap();
        let col = s.index_of(&[2, 0]).unwrap();
        let row = s1.index_of(&[1, 0]).unwrap();
        assert!((psi.get(row, col).re - (2.0 / dx).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn vacuum_field_is_zero_map() {
        let s = sector(3, 1.0, 0);
        let psi = field_annihilation(&s, 1).unwrap();
        assert_eq!(psi.shape(), (0, 1));
        assert_eq!(psi.nnz(), 0);
    }

    #[test]
    fn density_entries_and_sum() {
        let s = sector(3, 1.0, 3);
        let idx = s.index_of(&[2, 0, 1]).unwrap();
        assert_eq!(density_matrix(&s, 0).unwrap().get(idx, idx).re, 2.0);

        let s = sector(4, 0.3, 3);
        let mut total = SparseOperator::zeros(s.dim(), s.dim());
        for i in 0..4 {
            total = total.add_scaled(&density_matrix(&s, i).unwrap(), re(0.3));
        }
        let diff = total.add_scaled(&number_operator(&s), re(-1.0));
        assert!(diff.max_abs() < 1e-14);
    }

    #[test]
    fn current_is_hermitian_and_vacuum_zero() {
        let s = sector(5, 0.4, 2);
        for i in 0..5 {
            assert_eq!(current_matrix(&s, i).unwrap().hermiticity_defect(), 0.0);
        }
        let v = sector(5, 0.4, 0);
        assert_eq!(current_matrix(&v, 2).unwrap().max_abs(), 0.0);
        assert_eq!(k_matrix(&v, 2).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn k_equals_psi_dag_dpsi() {
        let s = sector(6, 0.25, 3);
        let f = FieldSet::new(&s).unwrap();
        for i in 0..6 {
            let diff = f.k(i).add_scaled(&f.psi_dag_dpsi(i), re(-1.0));
            assert!(diff.max_abs() <= 1e-12, "site {i}: {}", diff.max_abs());
        }
    }

    #[test]
    fn k_adjoint_identity() {
        let s = sector(5, 0.5, 2);
        let f = FieldSet::new(&s).unwrap();
        for i in 0..5 {
            let expect = f.gradient_density(i).scale_real(0.5).add_scaled(&f.current(i), Complex64::new(0.0, -1.0));
            assert!(f.k(i).adjoint().add_scaled(&expect, re(-1.0)).max_abs() <= 1e-12);
        }
    }

    #[test]
    fn kinetic_zero_mode_and_spectrum() {
        let n = 9;
        let dx = 0.3;
        let s = sector(n, dx, 1);
        let t = kinetic_matrix(&s).unwrap();
        assert_eq!(t.hermiticity_defect(), 0.0);
        let ones = vec![re(1.0); n];
        let tv = t.matvec(&ones);
        assert!(tv.iter().all(|z| z.norm() < 1e-12));
        let mut ev: Vec<f64> = t.to_dense().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        let mut expect: Vec<f64> = (0..n)
            .map(|k| (2.0 / (dx * dx)) * (1.0 - (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos()) * 0.5)
            .collect();
        expect.sort_by(f64::total_cmp);
        for (a, b) in ev.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn normal_ordered_pair_matches_occupation_formula() {
        let s = sector(4, 0.5, 3);
        for x in 0..4 {
            for y in 0..4 {
                let op = normal_ordered_pair(&s, x, y).unwrap();
                let d = pair_density_diagonal(&s, x, y);
                assert!(op.is_diagonal());
                for (i, v) in d.iter().enumerate() {
                    assert!((op.get(i, i).re - v).abs() < 1e-12);
                }
            }
        }
    }
}
