//! Commutators among the local operators h(x) and the hierarchy sums.

use current_algebra_checks::ConvergenceRecord;
use fock_lattice::{build_sector, number_operator, relative_commutator, FockSector, LatticeGrid, SparseOperator};

use crate::error::{FactorError, Result};
use crate::factor::{FactorSpec, Factorizer};

pub const COMMUTATION_DIMENSION_CAP: usize = 2000;

#[derive(Debug, Clone, PartialEq)]
pub struct LocalCommutator {
    pub x: usize,
    pub y: usize,
    /// Minimum-image distance in sites.
    pub separation: usize,
    pub relative: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlobalCommutator {
    pub p: u32,
    pub q: u32,
    pub relative: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HierarchyReport {
    pub local: Vec<LocalCommutator>,
    pub global: Vec<GlobalCommutator>,
    /// Largest entry of [H^(p), N] over the requested powers.
    pub number_commutator: f64,
}

impl HierarchyReport {
    pub fn worst_local_beyond(&self, separation: usize) -> f64 {
        self.local.iter().filter(|c| c.separation > separation).map(|c| c.relative).fold(0.0, f64::max)
    }

    pub fn worst_global(&self) -> f64 {
        self.global.iter().map(|c| c.relative).fold(0.0, f64::max)
    }
}

fn site_separation(grid: &LatticeGrid, x: usize, y: usize) -> usize {
    (grid.minimum_image(x, y) / grid.spacing()).round().abs() as usize
}

/// Every unordered site pair (including x = y) and every pair p < q of `powers`.
pub fn check_hierarchy_commutation(sector: &FockSector, spec: &FactorSpec, powers: &[u32]) -> Result<HierarchyReport> {
    if sector.dim() > COMMUTATION_DIMENSION_CAP {
        return Err(FactorError::Capacity { what: "sector dimension", size: sector.dim(), cap: COMMUTATION_DIMENSION_CAP });
    }
    let f = Factorizer::new(sector, *spec)?;
    let n = sector.n_sites();
    let locals: Vec<SparseOperator> = (0..n).map(|x| f.local_reduced(x)).collect::<Result<_>>()?;
    let mut local = Vec::new();
    for x in 0..n {
        for y in x..n {
            local.push(LocalCommutator {
                x,
                y,
                separation: site_separation(sector.grid(), x, y),
                relative: relative_commutator(&locals[x], &locals[y]),
            });
        }
    }
    let sums: Vec<(u32, SparseOperator)> = powers.iter().map(|&p| Ok((p, f.hierarchy(p)?))).collect::<Result<_>>()?;
    let num = number_operator(sector);
    let mut global = Vec::new();
    let mut number_commutator: f64 = 0.0;
    for (i, (p, hp)) in sums.iter().enumerate() {
        number_commutator = number_commutator.max(hp.commutator(&num).max_abs());
        for (q, hq) in &sums[i + 1..] {
            global.push(GlobalCommutator { p: *p, q: *q, relative: relative_commutator(hp, hq) });
        }
    }
    Ok(HierarchyReport { local, global, number_commutator })
}

/// Worst relative [h(x), h(y)] at a fixed site separation, over refined grids.
pub fn separation_convergence(
    length: f64,
    n_particles: usize,
    ladder: &[usize],
    separation: usize,
    spec_for: &dyn Fn(&LatticeGrid) -> FactorSpec,
) -> Result<ConvergenceRecord> {
    let mut spacings = Vec::new();
    let mut worst = Vec::new();
    for &n in ladder {
        let grid = LatticeGrid::with_length(n, length)?;
        let sector = build_sector(grid, n_particles)?;
        let f = Factorizer::new(&sector, spec_for(&grid))?;
        let mut w: f64 = 0.0;
        for x in 0..n {
            let y = (x + separation) % n;
            w = w.max(relative_commutator(&f.local_reduced(x)?, &f.local_reduced(y)?));
        }
        spacings.push(grid.spacing());
        worst.push(w);
    }
    Ok(ConvergenceRecord::new(spacings, worst)?)
}
